"""Execution of code matrices as dual-state machines.

A configuration pairs a control state with a data state.  The execution
agent repeatedly scans the cells out of its control state; under the
deterministic policy it takes the first rule (in declaration order) with a
nonempty image, under the 'all' policy it follows every enabled rule.

A computation is complete when its last configuration enables no
transition; it is successful when that configuration sits at the halt
state, failed otherwise.  Runs also stop at a step bound, reported as a
distinct outcome so that a bound hit is never confused with termination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .relations import CallCounter, image
from .values import UNSET, EvalError, copy_state, freeze_state, render_value

DEFAULT_STEP_BOUND = 1_000_000


@dataclass(frozen=True)
class Configuration:
    control: str
    data: dict

    def key(self):
        return (self.control, freeze_state(self.data))


@dataclass
class Trace:
    configs: list
    counters: dict
    revisits: dict

    @property
    def controls(self):
        return [c.control for c in self.configs]

    @property
    def final(self):
        return self.configs[-1]


SUCCESS = "success"
FAILURE = "failure"
STEP_LIMIT = "steplimit"


@dataclass
class Outcome:
    status: str  # success | failure | steplimit
    trace: Trace

    @property
    def success(self):
        return self.status == SUCCESS


class ExecutionError(Exception):
    """Evaluation error during a run; carries the partial trace."""

    def __init__(self, cause, trace):
        self.cause = cause
        self.trace = trace
        super().__init__(str(cause))


def _revisits(controls):
    out = {}
    for k in controls:
        out[k] = out.get(k, 0) + 1
    return out


def step(m, config, policy="det", counter=None):
    """Successor configurations of `config` under the matrix.

    Deterministic policy: scan rules out of the control state in declaration
    order and commit to the first one with a nonempty image; that image must
    be a singleton.  'all' policy: every successor of every rule.
    """
    if counter is not None:
        counter.begin_scan()
    rules = m.outgoing(config.control)
    if policy == "det":
        for to, rule in rules:
            img = image(rule, config.data, counter)
            if img:
                if len(img) > 1:
                    raise EvalError(
                        "rule %s -> %s has a non-singleton image under the "
                        "deterministic policy" % (config.control, to))
                return [Configuration(to, img[0])]
        return []
    if policy == "all":
        out = []
        seen = set()
        for to, rule in rules:
            for d2 in image(rule, config.data, counter):
                succ = Configuration(to, d2)
                key = succ.key()
                if key not in seen:
                    seen.add(key)
                    out.append(succ)
        return out
    raise ValueError("unknown policy %r" % policy)


def run(m, d0, policy="det", step_bound=DEFAULT_STEP_BOUND):
    """Run the machine from (start, d0) and classify the outcome.

    Counters tally builtin evaluations (one per stream test per scan cycle);
    revisits[k] counts the occurrences of k in the control sequence.
    """
    if step_bound <= 0:
        raise ValueError("step_bound must be positive")
    if policy == "all":
        return _run_search(m, d0, step_bound)
    counter = CallCounter()
    configs = [Configuration(m.start, copy_state(d0))]
    for _ in range(step_bound):
        current = configs[-1]
        if current.control == m.halt:
            break
        try:
            succs = step(m, current, "det", counter)
        except EvalError as exc:
            raise ExecutionError(exc, _mk_trace(configs, counter)) from exc
        if not succs:
            return Outcome(FAILURE, _mk_trace(configs, counter))
        configs.append(succs[0])
    else:
        if configs[-1].control != m.halt:
            return Outcome(STEP_LIMIT, _mk_trace(configs, counter))
    return Outcome(SUCCESS, _mk_trace(configs, counter))


def _mk_trace(configs, counter):
    return Trace(configs, dict(counter.counts), _revisits([c.control for c in configs]))


def _run_search(m, d0, step_bound):
    """Breadth-first 'all'-policy run: first successful computation if any,
    else the first failed one, else a step-limited branch."""
    outcomes = enumerate_runs(m, d0, step_bound)
    for o in outcomes:
        if o.status == SUCCESS:
            return o
    for o in outcomes:
        if o.status == FAILURE:
            return o
    return outcomes[0]


def enumerate_runs(m, d0, depth_bound):
    """All computations from (start, d0), breadth-first, up to depth_bound
    transitions: complete ones plus step-limited leaves."""
    if depth_bound < 0:
        raise ValueError("depth_bound must be nonnegative")
    start = Configuration(m.start, copy_state(d0))
    frontier = [([start], CallCounter())]
    outcomes = []
    for _depth in range(depth_bound):
        if not frontier:
            break
        nxt = []
        for configs, counter in frontier:
            current = configs[-1]
            if current.control == m.halt:
                outcomes.append(Outcome(SUCCESS, _mk_trace(configs, counter)))
                continue
            try:
                succs = step(m, current, "all", counter)
            except EvalError as exc:
                raise ExecutionError(exc, _mk_trace(configs, counter)) from exc
            if not succs:
                outcomes.append(Outcome(FAILURE, _mk_trace(configs, counter)))
                continue
            for i, succ in enumerate(succs):
                branch_counter = counter.copy() if i < len(succs) - 1 else counter
                nxt.append((configs + [succ], branch_counter))
        frontier = nxt
    for configs, counter in frontier:
        current = configs[-1]
        if current.control == m.halt:
            outcomes.append(Outcome(SUCCESS, _mk_trace(configs, counter)))
        else:
            try:
                succs = step(m, current, "all", counter)
            except EvalError as exc:
                raise ExecutionError(exc, _mk_trace(configs, counter)) from exc
            if not succs:
                outcomes.append(Outcome(FAILURE, _mk_trace(configs, counter)))
            else:
                outcomes.append(Outcome(STEP_LIMIT, _mk_trace(configs, counter)))
    return outcomes


def count_calls(trace):
    """Builtin call counts of a trace."""
    return dict(trace.counters)


def render_trace(m, trace):
    """Plain-text trace table: control state column, then one column per
    declared variable; scalar parameters appear in the header instead."""
    scalar_params = [d for d in m.decls
                     if d.kind == "param" and d.type in ("int", "bool", "sym")]
    columns = [d for d in m.decls if d not in scalar_params]

    initial = trace.configs[0].data
    header_items = []
    for d in scalar_params:
        v = initial.get(d.name, UNSET)
        header_items.append("%s = %s" % (d.name, render_value(v)))
    params_text = "   ".join(header_items)

    rows = []
    for cfg in trace.configs:
        rows.append([render_value(cfg.data.get(d.name, UNSET)) for d in columns])

    widths = []
    for i, d in enumerate(columns):
        w = len(d.name)
        for row in rows:
            w = max(w, len(row[i]))
        widths.append(w)

    def data_line(cells):
        return "  ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    left = "%-7s | "
    lines = []
    header3 = left % "" + data_line([d.name for d in columns])
    width = max([len(header3)] + [len(left % "") + len(data_line(r)) for r in rows])
    top = "control | data"
    if params_text:
        pad = max(width - len(top) - len(params_text), 4)
        top = top + " " * pad + params_text
    lines.append(top)
    lines.append(left % "state" + "state")
    lines.append(header3)
    lines.append("-" * max(width, len(top)))
    for cfg, row in zip(trace.configs, rows):
        lines.append("%6s  | " % cfg.control + data_line(row))
    return "\n".join(line.rstrip() for line in lines) + "\n"
