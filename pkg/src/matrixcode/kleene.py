"""Finite semantics for regular expressions and both machine theorems.

Two interpretations of the regular-expression signature (0, 1, +, ., *):

  - FiniteRelation: binary relations over {0..n-1}; 1 is the identity,
    '.' is relational composition, '*' the reflexive-transitive closure.
  - BoundedLanguage: sets of words truncated to a length bound; 1 is {e},
    '.' concatenation, '*' the Kleene star.  All operations silently drop
    words longer than the bound, so equalities are asserted only on the
    words within it.

On top of those: the algebraic identity suite with randomized environments
(including the two deliberately wrong denesting variants kept around as
counterexample generators), finite-state machines with word-set matrices,
and the closure characterizations of both machine kinds, each computed two
independent ways so the implementations can serve as each other's oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .relations import image
from .values import freeze_state


@dataclass(frozen=True)
class FiniteRelation:
    n: int
    pairs: frozenset

    def __post_init__(self):
        for a, b in self.pairs:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError("pair (%d, %d) outside [0, %d)" % (a, b, self.n))

    @classmethod
    def empty(cls, n):
        return cls(n, frozenset())

    @classmethod
    def identity(cls, n):
        return cls(n, frozenset((i, i) for i in range(n)))

    def union(self, other):
        return FiniteRelation(self.n, self.pairs | other.pairs)

    def then(self, other):
        by_left = {}
        for b, c in other.pairs:
            by_left.setdefault(b, []).append(c)
        out = set()
        for a, b in self.pairs:
            for c in by_left.get(b, ()):
                out.add((a, c))
        return FiniteRelation(self.n, frozenset(out))

    def star(self):
        return closure(self)

    def power(self, k):
        acc = FiniteRelation.identity(self.n)
        for _ in range(k):
            acc = acc.then(self)
        return acc

    def included_in(self, other):
        return self.pairs <= other.pairs


def closure(r):
    """Least reflexive-transitive superset: the fixpoint of X -> I + X;r."""
    acc = FiniteRelation.identity(r.n)
    while True:
        nxt = acc.union(acc.then(r))
        if nxt.pairs == acc.pairs:
            return acc
        acc = nxt


EMPTY_WORD = ""


@dataclass(frozen=True)
class BoundedLanguage:
    bound: int
    words: frozenset

    def __post_init__(self):
        for w in self.words:
            if len(w) > self.bound:
                raise ValueError("word %r longer than bound %d" % (w, self.bound))

    @classmethod
    def empty(cls, bound):
        return cls(bound, frozenset())

    @classmethod
    def unit(cls, bound):
        return cls(bound, frozenset([EMPTY_WORD]))

    @classmethod
    def of(cls, bound, words):
        return cls(bound, frozenset(w for w in words if len(w) <= bound))

    def union(self, other):
        return BoundedLanguage(self.bound, self.words | other.words)

    def then(self, other):
        out = set()
        for a in self.words:
            for b in other.words:
                if len(a) + len(b) <= self.bound:
                    out.add(a + b)
        return BoundedLanguage(self.bound, frozenset(out))

    def star(self):
        acc = BoundedLanguage.unit(self.bound)
        while True:
            nxt = acc.union(acc.then(self))
            if nxt.words == acc.words:
                return acc
            acc = nxt

    def power(self, k):
        acc = BoundedLanguage.unit(self.bound)
        for _ in range(k):
            acc = acc.then(self)
        return acc

    def included_in(self, other):
        return self.words <= other.words


# ---------------------------------------------------------------------------
# regular expressions

@dataclass(frozen=True)
class RZero:
    pass


@dataclass(frozen=True)
class ROne:
    pass


@dataclass(frozen=True)
class RConst:
    name: str


@dataclass(frozen=True)
class RPlus:
    left: object
    right: object


@dataclass(frozen=True)
class RDot:
    left: object
    right: object


@dataclass(frozen=True)
class RStar:
    operand: object


@dataclass(frozen=True)
class RPower:
    operand: object
    n: int


@dataclass(frozen=True)
class RRepeat:
    n: int
    operand: object  # nE = E + ... + E, n times


@dataclass(frozen=True)
class RPowerLess:
    operand: object
    n: int  # E^{<n} = E^0 + E^1 + ... + E^{n-1}


@dataclass(frozen=True)
class RSum:
    terms: tuple


def interp(e, env, zero, one):
    """Interpret a regular expression in the algebra of the environment.

    env maps constant names to FiniteRelation or BoundedLanguage values;
    zero and one are the corresponding 0 and 1 elements.
    """
    if isinstance(e, RZero):
        return zero
    if isinstance(e, ROne):
        return one
    if isinstance(e, RConst):
        if e.name not in env:
            raise KeyError("unbound regular-expression constant %r" % e.name)
        return env[e.name]
    if isinstance(e, RPlus):
        return interp(e.left, env, zero, one).union(interp(e.right, env, zero, one))
    if isinstance(e, RDot):
        return interp(e.left, env, zero, one).then(interp(e.right, env, zero, one))
    if isinstance(e, RStar):
        return interp(e.operand, env, zero, one).star()
    if isinstance(e, RPower):
        if e.n == 0:
            return one
        v = interp(e.operand, env, zero, one)
        return v.power(e.n)
    if isinstance(e, RRepeat):
        if e.n <= 0:
            raise ValueError("nE needs n > 0")
        return interp(e.operand, env, zero, one)  # + is idempotent
    if isinstance(e, RPowerLess):
        v = interp(e.operand, env, zero, one)
        acc = one
        p = one
        for _ in range(1, e.n):
            p = p.then(v)
            acc = acc.union(p)
        return acc
    if isinstance(e, RSum):
        acc = zero
        for t in e.terms:
            acc = acc.union(interp(t, env, zero, one))
        return acc
    raise TypeError("not a regular expression: %r" % (e,))


def interp_relations(e, env, n):
    return interp(e, env, FiniteRelation.empty(n), FiniteRelation.identity(n))


def interp_languages(e, env, bound):
    return interp(e, env, BoundedLanguage.empty(bound), BoundedLanguage.unit(bound))


# ---------------------------------------------------------------------------
# identity suite

E, F, G = RConst("E"), RConst("F"), RConst("G")


def _n_law(n):
    return [
        ("plus commutative", RPlus(E, F), RPlus(F, E)),
        ("plus idempotent", RPlus(E, E), E),
        ("dot distributes left", RDot(E, RPlus(F, G)), RPlus(RDot(E, F), RDot(E, G))),
        ("dot distributes right", RDot(RPlus(F, G), E), RPlus(RDot(F, E), RDot(G, E))),
        ("dot associative", RDot(E, RDot(F, G)), RDot(RDot(E, F), G)),
        ("zero is plus unit", RPlus(RZero(), E), E),
        ("one is dot unit", RDot(ROne(), E), E),
        ("one is dot unit (right)", RDot(E, ROne()), E),
        ("zero annihilates", RDot(RZero(), E), RZero()),
        ("zero annihilates (right)", RDot(E, RZero()), RZero()),
        ("star of star", RStar(RStar(E)), RStar(E)),
        ("sum denesting", RStar(RPlus(E, F)), RDot(RStar(RDot(RStar(E), F)), RStar(E))),
        ("product denesting", RStar(RDot(E, F)),
         RPlus(ROne(), RDot(RDot(E, RStar(RDot(F, E))), F))),
        ("power decomposition", RStar(E),
         RDot(RStar(RPower(E, n)), RPowerLess(E, n))),
    ]


PRINTED_VARIANTS = [
    ("sum denesting as printed", RStar(RPlus(E, F)),
     RDot(RDot(RStar(E), F), RStar(E))),
    ("product denesting as printed", RStar(RDot(E, F)),
     RPlus(ROne(), RDot(RDot(E, RStar(RDot(F, E))), E))),
]


@dataclass
class LawResult:
    law: str
    semantics: str
    trials: int
    failures: int
    first_counterexample: str = None
    expected_failure: bool = False

    @property
    def ok(self):
        return (self.failures > 0) if self.expected_failure else (self.failures == 0)


def _random_relation(rng, n):
    count = rng.randint(0, n * n)
    pool = [(a, b) for a in range(n) for b in range(n)]
    return FiniteRelation(n, frozenset(rng.sample(pool, count)))


def _random_language(rng, bound, alphabet):
    pool = [EMPTY_WORD]
    for a in alphabet:
        pool.append(a)
        for b in alphabet:
            pool.append(a + b)
    count = rng.randint(0, min(len(pool), 4))
    return BoundedLanguage(bound, frozenset(rng.sample(pool, count)))


def check_identities(seed=0, trials=200):
    """Randomized check of the identity suite under both semantics.

    The two printed denesting variants are included with expected_failure
    set: the report records a counterexample for each rather than hiding
    the discrepancy.  Also checks monotonicity of +, ., * under inclusion.
    """
    results = []
    for semantics in ("relations", "languages"):
        rng = random.Random(seed if semantics == "relations" else seed + 1)
        laws = {}
        for trial in range(trials):
            n_pow = rng.randint(1, 3)
            all_laws = [(name, lhs, rhs, False) for name, lhs, rhs in _n_law(n_pow)]
            all_laws += [(name, lhs, rhs, True) for name, lhs, rhs in PRINTED_VARIANTS]
            if semantics == "relations":
                n = rng.randint(1, 3)
                env = {v: _random_relation(rng, n) for v in "EFG"}
                ev = lambda t: interp_relations(t, env, n)
                shows = lambda v: sorted(v.pairs)
            else:
                bound = rng.randint(2, 4)
                alphabet = "ab"[: rng.randint(1, 2)]
                env = {v: _random_language(rng, bound, alphabet) for v in "EFG"}
                ev = lambda t: interp_languages(t, env, bound)
                shows = lambda v: sorted(v.words)
            for name, lhs, rhs, expected_failure in all_laws:
                rec = laws.setdefault(name, LawResult(name, semantics, 0, 0,
                                                      expected_failure=expected_failure))
                rec.trials += 1
                lv, rv = ev(lhs), ev(rhs)
                if lv != rv:
                    rec.failures += 1
                    if rec.first_counterexample is None:
                        rec.first_counterexample = (
                            "env %s: lhs %s != rhs %s"
                            % ({k: shows(v) for k, v in env.items()},
                               shows(lv), shows(rv)))
            _check_monotonic(rng, semantics, env, ev, laws)
        results.extend(laws.values())
    return results


def _check_monotonic(rng, semantics, env, ev, laws):
    rec = laws.setdefault("monotonicity", LawResult("monotonicity", semantics, 0, 0))
    rec.trials += 1
    small = env["E"]
    big = small.union(env["F"])  # small <= big by construction
    other = env["G"]
    checks = [
        small.union(other).included_in(big.union(other)),
        small.then(other).included_in(big.then(other)),
        other.then(small).included_in(other.then(big)),
        small.star().included_in(big.star()),
    ]
    if not all(checks):
        rec.failures += 1
        if rec.first_counterexample is None:
            rec.first_counterexample = "env %r" % (env,)


def render_identity_report(results):
    lines = []
    for r in results:
        status = "ok" if r.ok else "FAIL"
        note = ""
        if r.expected_failure:
            note = (" (wrong on purpose; counterexample found)" if r.failures
                    else " (wrong on purpose; NO counterexample found)")
        lines.append("%-4s %-10s  %-28s %d/%d trials failed%s"
                     % (status, r.semantics, r.law, r.failures, r.trials, note))
        if r.failures and r.first_counterexample and r.expected_failure:
            lines.append("       e.g. %s" % r.first_counterexample)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# finite-state machines

@dataclass(frozen=True)
class FSM:
    states: tuple
    alphabet: tuple
    delta: dict  # (from, to) -> frozenset of words
    start: str
    halt: str

    def __post_init__(self):
        for (frm, to), words in self.delta.items():
            if to == self.start and words:
                raise ValueError("no transition may enter the start state")
            if frm == self.halt and words:
                raise ValueError("no transition may leave the halt state")


def fsm_language(fsm, bound):
    """Accepted words of length <= bound, computed two independent ways:
    (a) the [start, halt] entry of the closed word-set matrix, and
    (b) breadth-first search over FSM configurations."""
    by_matrix = _fsm_language_matrix(fsm, bound)
    by_search = _fsm_language_search(fsm, bound)
    return by_matrix, by_search


def _fsm_language_matrix(fsm, bound):
    ks = fsm.states
    delta = {key: BoundedLanguage.of(bound, words)
             for key, words in fsm.delta.items() if words}
    ident = {(k, k): BoundedLanguage.unit(bound) for k in ks}
    acc = ident
    while True:
        nxt = {}
        for i in ks:
            for k in ks:
                cell = BoundedLanguage.empty(bound)
                for j in ks:
                    a = acc.get((i, j))
                    b = delta.get((j, k))
                    if a is not None and b is not None:
                        cell = cell.union(a.then(b))
                if (i, k) in ident:
                    cell = cell.union(ident[(i, k)])
                if cell.words:
                    nxt[(i, k)] = cell
        if {k: v.words for k, v in nxt.items()} == {k: v.words for k, v in acc.items()}:
            break
        acc = nxt
    entry = acc.get((fsm.start, fsm.halt))
    return entry.words if entry is not None else frozenset()


def _fsm_language_search(fsm, bound):
    start = (fsm.start, EMPTY_WORD)
    seen = {start}
    frontier = [start]
    accepted = set()
    while frontier:
        nxt = []
        for k, w in frontier:
            if k == fsm.halt:
                accepted.add(w)
            for (frm, to), words in fsm.delta.items():
                if frm != k:
                    continue
                for u in words:
                    w2 = w + u
                    if len(w2) > bound:
                        continue
                    cfg = (to, w2)
                    if cfg not in seen:
                        seen.add(cfg)
                        nxt.append(cfg)
        frontier = nxt
    return frozenset(accepted)


# ---------------------------------------------------------------------------
# finite dual-state machines: R = closure(delta)[S, H] two ways

def tabulate(m, dom):
    """Explicit finite matrix of a code matrix over an enumerable domain.

    Returns (state_list, index_matrix) where index_matrix maps (from, to)
    control pairs to FiniteRelation over data-state indices.  Successor
    states outside the domain are dropped, i.e. every cell is restricted
    to D x D.
    """
    from .verifier import enumerate_states
    states = list(enumerate_states(dom, m.decls))
    index = {freeze_state(d): i for i, d in enumerate(states)}
    n = len(states)
    cells = {}
    for (frm, to), rules in m.cells.items():
        if not rules:
            continue
        pairs = set()
        rel = m.cell_relation(frm, to)
        for i, d in enumerate(states):
            for out in image(rel, d):
                j = index.get(freeze_state(out))
                if j is not None:
                    pairs.add((i, j))
        if pairs:
            cells[(frm, to)] = FiniteRelation(n, frozenset(pairs))
    return states, cells


def matrix_closure(control_states, cells, n):
    """Reflexive-transitive closure of a K-indexed matrix of finite relations."""
    ident = {(k, k): FiniteRelation.identity(n) for k in control_states}
    acc = dict(ident)
    while True:
        nxt = {}
        for i in control_states:
            for k in control_states:
                cell = FiniteRelation.empty(n)
                for j in control_states:
                    a = acc.get((i, j))
                    b = cells.get((j, k))
                    if a is not None and b is not None:
                        cell = cell.union(a.then(b))
                if (i, k) in ident:
                    cell = cell.union(ident[(i, k)])
                if cell.pairs:
                    nxt[(i, k)] = cell
        if {k: v.pairs for k, v in nxt.items()} == {k: v.pairs for k, v in acc.items()}:
            break
        acc = nxt
    return acc


def _reachability(control_states, cells, n, start, halt):
    """Configuration-graph search: all (d, d') with a path (start, d) ->*
    (halt, d').  Independent of the matrix-closure computation."""
    succ = {}
    for (frm, to), rel in cells.items():
        for a, b in rel.pairs:
            succ.setdefault((frm, a), []).append((to, b))
    result = set()
    for d in range(n):
        seen = {(start, d)}
        frontier = [(start, d)]
        while frontier:
            nxt = []
            for cfg in frontier:
                if cfg[0] == halt:
                    result.add((d, cfg[1]))
                for s in succ.get(cfg, ()):
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
    return frozenset(result)


def finite_dsm_relation(m, dom):
    """The relation computed by the machine over a finite domain, twice:
    via closure of the tabulated matrix and via configuration-graph
    reachability.  Returns (states, by_closure, by_search)."""
    states, cells = tabulate(m, dom)
    n = len(states)
    closed = matrix_closure(m.states, cells, n)
    entry = closed.get((m.start, m.halt))
    by_closure = entry.pairs if entry is not None else frozenset()
    by_search = _reachability(m.states, cells, n, m.start, m.halt)
    return states, frozenset(by_closure), by_search
