"""Code matrices: the transition matrix of a dual-state machine.

A CodeMatrix holds the control-state set K with distinguished start and
halt states, variable declarations defining the data-state space, and a
cell map (from, to) -> ordered rule list.  A cell denotes the union of its
rules; the rule order feeds the deterministic interpreter's scan policy.

This module also provides the symbolic matrix product and powers over
plain cell maps of relation expressions: (M;N)[i,k] is the union over j of
Seq(M[i,j], N[j,k]), with absent cells acting as the empty relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .expr import BoolLit
from .relations import Guard, Seq, Union, relation_vars, union_of

Pos = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: str  # 'int' | 'bool' | 'sym' | 'array' | 'stream' | 'tape'
    kind: str  # 'param' | 'var'
    length: object = None  # array length expression
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # 'error' | 'warning'
    location: str
    message: str

    def __str__(self):
        return "%s: %s: %s" % (self.severity, self.location, self.message)


@dataclass
class CodeMatrix:
    name: str
    states: tuple  # K, in first-mention order
    start: str
    halt: str
    cells: dict  # (from, to) -> tuple of rules, insertion-ordered
    decls: tuple  # of VarDecl

    def outgoing(self, control):
        """(to, rule) pairs out of a control state, in declaration order."""
        out = []
        for (frm, to), rules in self.cells.items():
            if frm == control:
                out.extend((to, rule) for rule in rules)
        return out

    def cell_relation(self, frm, to):
        rules = self.cells.get((frm, to))
        return union_of(list(rules)) if rules else None

    def symbolic(self):
        """Cell map as single relation expressions (rule lists folded to unions)."""
        return {key: union_of(list(rules)) for key, rules in self.cells.items() if rules}

    def decl(self, name):
        for d in self.decls:
            if d.name == name:
                return d
        return None

    def __eq__(self, other):
        if not isinstance(other, CodeMatrix):
            return NotImplemented
        return (self.name == other.name and self.states == other.states
                and self.start == other.start and self.halt == other.halt
                and self.cells == other.cells and self.decls == other.decls)


def validate(m):
    """Structural diagnostics for a code matrix; empty list means well-formed."""
    diags = []

    def err(location, message):
        diags.append(Diagnostic("error", location, message))

    if m.start not in m.states:
        err(m.name, "start state %r is not a control state" % m.start)
    if m.halt not in m.states:
        err(m.name, "halt state %r is not a control state" % m.halt)
    if m.start == m.halt:
        err(m.name, "start and halt states must differ")

    declared = {d.name for d in m.decls}
    stream_decls = {d.name for d in m.decls if d.type == "stream"}
    tape_decls = [d.name for d in m.decls if d.type == "tape"]

    for (frm, to), rules in m.cells.items():
        loc = "%s -> %s" % (frm, to)
        if frm not in m.states:
            err(loc, "unknown control state %r" % frm)
        if to not in m.states:
            err(loc, "unknown control state %r" % to)
        if to == m.start:
            err(loc, "no transition may enter the start state %r" % m.start)
        if frm == m.halt:
            err(loc, "no transition may leave the halt state %r" % m.halt)
        for rule in rules:
            used = relation_vars(rule)
            for name in sorted(used - declared):
                if name in ("left", "right", "out"):
                    err(loc, "stream builtin needs a declared stream %r" % name)
                else:
                    err(loc, "undeclared variable %r" % name)
            for name in sorted(used & declared):
                if name in ("left", "right", "out") and name not in stream_decls:
                    needs_stream = _mentions_stream_builtin(rule, name)
                    if needs_stream:
                        err(loc, "%r must be declared as a stream" % name)
            if _mentions_tape_builtin(rule) and len(tape_decls) != 1:
                err(loc, "tape builtins need exactly one declared tape variable")
    return diags


def _walk_builtins(rule):
    from .relations import Builtin, Seq as _Seq, Union as _Union
    if isinstance(rule, Builtin):
        yield rule
    elif isinstance(rule, _Seq):
        yield from _walk_builtins(rule.first)
        yield from _walk_builtins(rule.second)
    elif isinstance(rule, _Union):
        yield from _walk_builtins(rule.left)
        yield from _walk_builtins(rule.right)


def _mentions_stream_builtin(rule, stream):
    sides = {"left": ("getL", "ngetL", "putL"),
             "right": ("getR", "ngetR", "putR"),
             "out": ("putL", "putR")}
    return any(b.name in sides[stream] for b in _walk_builtins(rule))


def _mentions_tape_builtin(rule):
    return any(b.name in ("rd", "wr", "dir") for b in _walk_builtins(rule))


def identity(states):
    """Identity matrix: the full identity relation on every diagonal cell."""
    return {(k, k): Guard(BoolLit(True)) for k in states}


def product(states, m, n):
    """Symbolic matrix product; absent cells are the empty relation."""
    out = {}
    for i in states:
        for k in states:
            terms = []
            for j in states:
                a = m.get((i, j))
                b = n.get((j, k))
                if a is not None and b is not None:
                    terms.append(Seq(a, b))
            if terms:
                out[(i, k)] = union_of(terms)
    return out


def power(states, m, n):
    """n-th matrix power; the zeroth power is the identity matrix."""
    if n < 0:
        raise ValueError("matrix power needs n >= 0")
    acc = identity(states)
    for _ in range(n):
        acc = product(states, acc, m)
    return acc
