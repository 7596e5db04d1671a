"""Relation expressions and their images: binary relations over data states.

A matrix cell is built from guards, assignment blocks and builtin relations,
composed sequentially with Seq and alternated with Union.  image(r, d)
computes { d' | (d, d') in [[r]] } as an explicit list of data states with
structural duplicates collapsed.

Builtin catalogue (the stream/tape vocabulary of the DSL):

  getL(v) / getR(v)   guard: stream nonempty; binds its head into v
  ngetL / ngetR       guard: stream empty
  putL / putR         move the stream head onto the out stream (error if empty)
  rd(c)               guard: scanned tape symbol equals c
  wr(c)               write c on the scanned square, then move per direction
  dir(x)              set the tape direction to L, R or d

get/nget work on the distinguished stream variables 'left' and 'right';
put moves onto 'out'.  Tape builtins act on the single tape-typed variable
of the state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .expr import eval_expr, free_vars, render_expr
from .values import EvalError, Tape, copy_state, freeze_state

Pos = Optional[Tuple[int, int]]


def _pos_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Guard:
    expr: object
    pos: Pos = _pos_field()


# assignment target: ('var', name) or ('elem', name, index_expr)
@dataclass(frozen=True)
class Assign:
    targets: tuple  # tuple of (target, expr), executed left to right
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Builtin:
    name: str
    arg: object = None  # var name for getL/getR, symbol for rd/wr, L/R/d for dir
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Seq:
    first: object
    second: object
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Union:
    left: object
    right: object
    pos: Pos = _pos_field()


BUILTIN_NAMES = ("getL", "getR", "ngetL", "ngetR", "putL", "putR", "rd", "wr", "dir")

# counter key per builtin; both polarities of a stream test share one key
COUNTER_KEYS = ("getL", "getR", "putL", "putR", "rd", "wr", "dir")
_FAMILY = {"ngetL": "getL", "ngetR": "getR"}


class CallCounter:
    """Counts builtin evaluations the way translated code would call them.

    Within one scan cycle of the execution agent a stream test (getL/ngetL,
    getR/ngetR) is counted once no matter how many rules consult it, because
    the translated dispatch calls the function once and branches on the
    result.  Everything else counts per evaluation.
    """

    def __init__(self):
        self.counts = {k: 0 for k in COUNTER_KEYS}
        self._seen_gets = set()

    def begin_scan(self):
        self._seen_gets = set()

    def note(self, name):
        key = _FAMILY.get(name, name)
        if key in ("getL", "getR"):
            if key in self._seen_gets:
                return
            self._seen_gets.add(key)
        self.counts[key] += 1

    def copy(self):
        c = CallCounter()
        c.counts = dict(self.counts)
        c._seen_gets = set(self._seen_gets)
        return c


def _note(counter, name):
    if counter is not None:
        counter.note(name)


def _get_stream(state, name, pos):
    try:
        v = state[name]
    except KeyError:
        raise EvalError("stream %r is not declared" % name, var=name, pos=pos) from None
    if not isinstance(v, tuple):
        raise EvalError("variable %r is not a stream" % name, var=name, pos=pos)
    return v


def _get_tape(state, pos):
    tapes = [(n, v) for n, v in state.items() if isinstance(v, Tape)]
    if len(tapes) != 1:
        raise EvalError("tape builtins need exactly one bound tape variable", pos=pos)
    return tapes[0]


def _builtin_image(b, state, counter):
    name = b.name
    if name in ("getL", "getR"):
        _note(counter, name)
        src = "left" if name == "getL" else "right"
        stream = _get_stream(state, src, b.pos)
        if not stream:
            return []
        out = copy_state(state)
        out[b.arg] = stream[0]
        return [out]
    if name in ("ngetL", "ngetR"):
        _note(counter, name)
        src = "left" if name == "ngetL" else "right"
        stream = _get_stream(state, src, b.pos)
        return [] if stream else [state]
    if name in ("putL", "putR"):
        _note(counter, name)
        src = "left" if name == "putL" else "right"
        stream = _get_stream(state, src, b.pos)
        if not stream:
            raise EvalError("%s on an empty stream" % name, var=src, pos=b.pos)
        sink = _get_stream(state, "out", b.pos)
        out = copy_state(state)
        out[src] = stream[1:]
        out["out"] = sink + (stream[0],)
        return [out]
    if name == "rd":
        _note(counter, name)
        _, tape = _get_tape(state, b.pos)
        return [state] if tape.read() == b.arg else []
    if name == "wr":
        _note(counter, name)
        tname, tape = _get_tape(state, b.pos)
        out = copy_state(state)
        out[tname].write(b.arg)
        return [out]
    if name == "dir":
        _note(counter, name)
        tname, tape = _get_tape(state, b.pos)
        out = copy_state(state)
        out[tname].set_direction(b.arg)
        return [out]
    raise EvalError("unknown builtin %r" % name, pos=b.pos)


def _assign_image(a, state):
    out = copy_state(state)
    for target, rhs in a.targets:
        value = eval_expr(out, rhs)
        if target[0] == "var":
            name = target[1]
            if name not in out:
                raise EvalError("assignment to undeclared variable", var=name, pos=a.pos)
            if isinstance(out[name], (list, tuple, Tape)):
                raise EvalError("cannot assign a scalar to %r" % name, var=name, pos=a.pos)
            out[name] = value
        else:
            _, name, idx_expr = target
            arr = out.get(name)
            if not isinstance(arr, list):
                raise EvalError("element assignment needs an array", var=name, pos=a.pos)
            i = eval_expr(out, idx_expr)
            if not isinstance(i, int) or isinstance(i, bool):
                raise EvalError("array index must be an integer", var=name, pos=a.pos)
            if not 0 <= i < len(arr):
                raise EvalError(
                    "index %d out of bounds for length %d" % (i, len(arr)),
                    var=name, pos=a.pos)
            arr[i] = value
    return [out]


def image(r, state, counter=None):
    """All successor states of `state` under relation expression `r`.

    Duplicates are collapsed structurally.  Evaluation errors propagate as
    EvalError; an empty result just means the relation has no transition
    from this state.
    """
    if isinstance(r, Guard):
        b = eval_expr(state, r.expr)
        if not isinstance(b, bool):
            raise EvalError("guard is not boolean", pos=r.pos)
        return [state] if b else []
    if isinstance(r, Assign):
        return _assign_image(r, state)
    if isinstance(r, Builtin):
        return _builtin_image(r, state, counter)
    if isinstance(r, Seq):
        results = []
        seen = set()
        for mid in image(r.first, state, counter):
            for out in image(r.second, mid, counter):
                key = freeze_state(out)
                if key not in seen:
                    seen.add(key)
                    results.append(out)
        return results
    if isinstance(r, Union):
        results = []
        seen = set()
        for out in image(r.left, state, counter) + image(r.right, state, counter):
            key = freeze_state(out)
            if key not in seen:
                seen.add(key)
                results.append(out)
        return results
    raise EvalError("not a relation expression: %r" % (r,))


def seq_atoms(r):
    """Flatten nested Seq into the left-to-right list of atoms."""
    if isinstance(r, Seq):
        return seq_atoms(r.first) + seq_atoms(r.second)
    return [r]


def seq_of(atoms):
    r = atoms[0]
    for a in atoms[1:]:
        r = Seq(r, a)
    return r


def union_of(parts):
    r = parts[0]
    for p in parts[1:]:
        r = Union(r, p)
    return r


def relation_vars(r):
    """Names of state variables mentioned by a relation expression."""
    if isinstance(r, Guard):
        return free_vars(r.expr)
    if isinstance(r, Assign):
        out = set()
        for target, rhs in r.targets:
            out.add(target[1])
            if target[0] == "elem":
                out |= free_vars(target[2])
            out |= free_vars(rhs)
        return out
    if isinstance(r, Builtin):
        if r.name in ("getL", "ngetL"):
            base = {"left"}
        elif r.name in ("getR", "ngetR"):
            base = {"right"}
        elif r.name == "putL":
            base = {"left", "out"}
        elif r.name == "putR":
            base = {"right", "out"}
        else:
            base = set()
        if r.name in ("getL", "getR"):
            base.add(r.arg)
        return base
    if isinstance(r, (Seq, Union)):
        a = r.first if isinstance(r, Seq) else r.left
        b = r.second if isinstance(r, Seq) else r.right
        return relation_vars(a) | relation_vars(b)
    raise TypeError("not a relation expression: %r" % (r,))


def render_relation(r):
    """Source text for a relation expression (rules joined with '|')."""
    if isinstance(r, Union):
        return "%s | %s" % (render_relation(r.left), render_relation(r.right))
    return "; ".join(_render_atom(a) for a in seq_atoms(r))


def _render_atom(a):
    if isinstance(a, Guard):
        return "[%s]" % render_expr(a.expr)
    if isinstance(a, Assign):
        parts = []
        for target, rhs in a.targets:
            if target[0] == "var":
                lhs = target[1]
            else:
                lhs = "%s[%s]" % (target[1], render_expr(target[2]))
            parts.append("%s = %s" % (lhs, render_expr(rhs)))
        return "{ %s }" % "; ".join(parts)
    if isinstance(a, Builtin):
        if a.name in ("getL", "getR"):
            return "%s(%s)" % (a.name, a.arg)
        if a.name in ("rd", "wr"):
            return "%s('%s')" % (a.name, a.arg)
        if a.name == "dir":
            return "dir(%s)" % a.arg
        return a.name
    if isinstance(a, Union):
        return "(%s)" % render_relation(a)
    raise TypeError("not a rule atom: %r" % (a,))
