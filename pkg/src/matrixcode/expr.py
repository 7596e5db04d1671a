"""Expression trees and their side-effect-free evaluation over data states.

Expressions cover integer arithmetic, array indexing, comparisons and
boolean connectives.  Conditions (but not guards inside matrix cells) may
additionally use bounded quantifiers and the stream observers len/count
and stream indexing; the parser enforces that restriction, evaluation here
is uniform.

Division and modulo truncate toward zero (C99 semantics), so that emitted
C code and the evaluator agree on negative operands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .values import UNSET, EvalError, check_int64

Pos = Optional[Tuple[int, int]]


def _pos_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SymLit:
    value: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Index:
    name: str
    index: object
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' | 'not'
    operand: object
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / % == != < <= > >= and or
    left: object
    right: object
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Quant:
    kind: str  # 'forall' | 'exists'
    var: str
    lo: object
    hi: object
    body: object
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Len:
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Count:
    name: str
    value: object
    pos: Pos = _pos_field()


def _lookup(state, locals_, name, pos):
    if locals_ is not None and name in locals_:
        return locals_[name]
    try:
        v = state[name]
    except KeyError:
        raise EvalError("unbound variable", var=name, pos=pos) from None
    if v is UNSET:
        raise EvalError("read of uninitialized variable", var=name, pos=pos)
    return v


def _want_int(v, e):
    if isinstance(v, bool) or not isinstance(v, int):
        raise EvalError("expected an integer, got %r" % (v,), pos=e.pos)
    return v


def _want_bool(v, e):
    if not isinstance(v, bool):
        raise EvalError("expected a boolean, got %r" % (v,), pos=e.pos)
    return v


def _trunc_div(a, b, pos):
    if b == 0:
        raise EvalError("division by zero", pos=pos)
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return q


def eval_expr(state, e, locals_=None):
    """Value of expression e under the given data state.  Pure: never mutates."""
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, SymLit):
        return e.value
    if isinstance(e, Var):
        return _lookup(state, locals_, e.name, e.pos)
    if isinstance(e, Index):
        seq = _lookup(state, locals_, e.name, e.pos)
        if not isinstance(seq, (list, tuple)):
            raise EvalError("indexing a non-sequence", var=e.name, pos=e.pos)
        i = _want_int(eval_expr(state, e.index, locals_), e)
        if not 0 <= i < len(seq):
            raise EvalError(
                "index %d out of bounds for length %d" % (i, len(seq)),
                var=e.name, pos=e.pos)
        v = seq[i]
        if v is UNSET:
            raise EvalError("read of uninitialized element %d" % i, var=e.name, pos=e.pos)
        return v
    if isinstance(e, Unary):
        if e.op == "neg":
            return check_int64(-_want_int(eval_expr(state, e.operand, locals_), e), e.pos)
        if e.op == "not":
            return not _want_bool(eval_expr(state, e.operand, locals_), e)
        raise EvalError("unknown unary operator %r" % e.op, pos=e.pos)
    if isinstance(e, Binary):
        op = e.op
        if op == "and":
            if not _want_bool(eval_expr(state, e.left, locals_), e):
                return False
            return _want_bool(eval_expr(state, e.right, locals_), e)
        if op == "or":
            if _want_bool(eval_expr(state, e.left, locals_), e):
                return True
            return _want_bool(eval_expr(state, e.right, locals_), e)
        lv = eval_expr(state, e.left, locals_)
        rv = eval_expr(state, e.right, locals_)
        if op in ("==", "!="):
            if type(lv) is not type(rv):
                raise EvalError("comparison of mismatched types", pos=e.pos)
            return (lv == rv) if op == "==" else (lv != rv)
        a = _want_int(lv, e)
        b = _want_int(rv, e)
        if op == "+":
            return check_int64(a + b, e.pos)
        if op == "-":
            return check_int64(a - b, e.pos)
        if op == "*":
            return check_int64(a * b, e.pos)
        if op == "/":
            return check_int64(_trunc_div(a, b, e.pos), e.pos)
        if op == "%":
            return check_int64(a - _trunc_div(a, b, e.pos) * b, e.pos)
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise EvalError("unknown operator %r" % op, pos=e.pos)
    if isinstance(e, Quant):
        lo = _want_int(eval_expr(state, e.lo, locals_), e)
        hi = _want_int(eval_expr(state, e.hi, locals_), e)
        inner = dict(locals_) if locals_ else {}
        for i in range(lo, hi + 1):
            inner[e.var] = i
            b = _want_bool(eval_expr(state, e.body, inner), e)
            if e.kind == "forall" and not b:
                return False
            if e.kind == "exists" and b:
                return True
        return e.kind == "forall"
    if isinstance(e, Len):
        seq = _lookup(state, locals_, e.name, e.pos)
        if not isinstance(seq, (list, tuple)):
            raise EvalError("len of a non-sequence", var=e.name, pos=e.pos)
        return len(seq)
    if isinstance(e, Count):
        seq = _lookup(state, locals_, e.name, e.pos)
        if not isinstance(seq, (list, tuple)):
            raise EvalError("count over a non-sequence", var=e.name, pos=e.pos)
        x = _want_int(eval_expr(state, e.value, locals_), e)
        return sum(1 for v in seq if v == x)
    raise EvalError("not an expression: %r" % (e,))


def compile_expr(e):
    """Compile an expression tree to a Python closure fn(state, locals_).

    Same semantics as eval_expr (which stays the reference implementation;
    the two are checked against each other in the test suite), roughly an
    order of magnitude faster for the verifier's enumeration loops.
    """
    if isinstance(e, (IntLit, BoolLit, SymLit)):
        v = e.value
        return lambda s, l=None: v
    if isinstance(e, Var):
        name, pos = e.name, e.pos
        def var_fn(s, l=None, name=name, pos=pos):
            if l is not None and name in l:
                return l[name]
            try:
                v = s[name]
            except KeyError:
                raise EvalError("unbound variable", var=name, pos=pos) from None
            if v is UNSET:
                raise EvalError("read of uninitialized variable", var=name, pos=pos)
            return v
        return var_fn
    if isinstance(e, Index):
        base = compile_expr(Var(e.name, e.pos))
        idx = compile_expr(e.index)
        name, pos = e.name, e.pos
        def index_fn(s, l=None):
            seq = base(s, l)
            if not isinstance(seq, (list, tuple)):
                raise EvalError("indexing a non-sequence", var=name, pos=pos)
            i = idx(s, l)
            if isinstance(i, bool) or not isinstance(i, int):
                raise EvalError("array index must be an integer", var=name, pos=pos)
            if not 0 <= i < len(seq):
                raise EvalError("index %d out of bounds for length %d" % (i, len(seq)),
                                var=name, pos=pos)
            v = seq[i]
            if v is UNSET:
                raise EvalError("read of uninitialized element %d" % i,
                                var=name, pos=pos)
            return v
        return index_fn
    if isinstance(e, Unary):
        sub = compile_expr(e.operand)
        pos = e.pos
        if e.op == "neg":
            def neg_fn(s, l=None):
                v = sub(s, l)
                if isinstance(v, bool) or not isinstance(v, int):
                    raise EvalError("expected an integer, got %r" % (v,), pos=pos)
                return check_int64(-v, pos)
            return neg_fn
        def not_fn(s, l=None):
            v = sub(s, l)
            if not isinstance(v, bool):
                raise EvalError("expected a boolean, got %r" % (v,), pos=pos)
            return not v
        return not_fn
    if isinstance(e, Binary):
        lf = compile_expr(e.left)
        rf = compile_expr(e.right)
        op, pos = e.op, e.pos

        if op in ("and", "or"):
            want = op == "or"
            def bool_fn(s, l=None):
                a = lf(s, l)
                if not isinstance(a, bool):
                    raise EvalError("expected a boolean, got %r" % (a,), pos=pos)
                if a is want:
                    return want
                b = rf(s, l)
                if not isinstance(b, bool):
                    raise EvalError("expected a boolean, got %r" % (b,), pos=pos)
                return b
            return bool_fn

        if op in ("==", "!="):
            eq = op == "=="
            def eq_fn(s, l=None):
                a, b = lf(s, l), rf(s, l)
                if type(a) is not type(b):
                    raise EvalError("comparison of mismatched types", pos=pos)
                return (a == b) is eq
            return eq_fn

        def arith_fn(s, l=None):
            a, b = lf(s, l), rf(s, l)
            if isinstance(a, bool) or not isinstance(a, int):
                raise EvalError("expected an integer, got %r" % (a,), pos=pos)
            if isinstance(b, bool) or not isinstance(b, int):
                raise EvalError("expected an integer, got %r" % (b,), pos=pos)
            if op == "<":
                return a < b
            if op == "<=":
                return a <= b
            if op == ">":
                return a > b
            if op == ">=":
                return a >= b
            if op == "+":
                return check_int64(a + b, pos)
            if op == "-":
                return check_int64(a - b, pos)
            if op == "*":
                return check_int64(a * b, pos)
            if op == "/":
                return check_int64(_trunc_div(a, b, pos), pos)
            return check_int64(a - _trunc_div(a, b, pos) * b, pos)
        return arith_fn
    if isinstance(e, Quant):
        lo_f = compile_expr(e.lo)
        hi_f = compile_expr(e.hi)
        body_f = compile_expr(e.body)
        var, pos, universal = e.var, e.pos, e.kind == "forall"
        def quant_fn(s, l=None):
            lo, hi = lo_f(s, l), hi_f(s, l)
            for bound in (lo, hi):
                if isinstance(bound, bool) or not isinstance(bound, int):
                    raise EvalError("quantifier bound must be an integer", pos=pos)
            inner = dict(l) if l else {}
            for i in range(lo, hi + 1):
                inner[var] = i
                b = body_f(s, inner)
                if not isinstance(b, bool):
                    raise EvalError("quantifier body is not boolean", pos=pos)
                if b is not universal:
                    return not universal
            return universal
        return quant_fn
    if isinstance(e, Len):
        base = compile_expr(Var(e.name, e.pos))
        name, pos = e.name, e.pos
        def len_fn(s, l=None):
            seq = base(s, l)
            if not isinstance(seq, (list, tuple)):
                raise EvalError("len of a non-sequence", var=name, pos=pos)
            return len(seq)
        return len_fn
    if isinstance(e, Count):
        base = compile_expr(Var(e.name, e.pos))
        val_f = compile_expr(e.value)
        name, pos = e.name, e.pos
        def count_fn(s, l=None):
            seq = base(s, l)
            if not isinstance(seq, (list, tuple)):
                raise EvalError("count over a non-sequence", var=name, pos=pos)
            x = val_f(s, l)
            if isinstance(x, bool) or not isinstance(x, int):
                raise EvalError("count needs an integer value", pos=pos)
            return sum(1 for v in seq if v == x)
        return count_fn
    raise EvalError("not an expression: %r" % (e,))


def free_vars(e, bound=frozenset()):
    """Names of state variables the expression reads."""
    if isinstance(e, (IntLit, BoolLit, SymLit)):
        return set()
    if isinstance(e, Var):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Index):
        base = set() if e.name in bound else {e.name}
        return base | free_vars(e.index, bound)
    if isinstance(e, Unary):
        return free_vars(e.operand, bound)
    if isinstance(e, Binary):
        return free_vars(e.left, bound) | free_vars(e.right, bound)
    if isinstance(e, Quant):
        out = free_vars(e.lo, bound) | free_vars(e.hi, bound)
        return out | free_vars(e.body, bound | {e.var})
    if isinstance(e, Len):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Count):
        base = set() if e.name in bound else {e.name}
        return base | free_vars(e.value, bound)
    raise TypeError("not an expression: %r" % (e,))


_PREC = {
    "or": 1, "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}


def render_expr(e, parent_prec=0):
    """Deterministic source text for an expression, re-parseable by the DSL."""
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, SymLit):
        return "'%s'" % e.value
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Index):
        return "%s[%s]" % (e.name, render_expr(e.index))
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + render_expr(e.operand, 7)
        return "not " + render_expr(e.operand, 3)
    if isinstance(e, Binary):
        p = _PREC[e.op]
        text = "%s %s %s" % (render_expr(e.left, p), e.op,
                             render_expr(e.right, p + 1))
        return "(%s)" % text if p < parent_prec else text
    if isinstance(e, Quant):
        return "%s %s in %s..%s (%s)" % (
            e.kind, e.var, render_expr(e.lo, 5), render_expr(e.hi, 5),
            render_expr(e.body))
    if isinstance(e, Len):
        return "len(%s)" % e.name
    if isinstance(e, Count):
        return "count(%s, %s)" % (e.name, render_expr(e.value))
    raise TypeError("not an expression: %r" % (e,))
