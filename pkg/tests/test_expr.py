import random

import pytest

from matrixcode.expr import (Binary, BoolLit, IntLit, Index, Len, Quant,
                             Unary, Var, compile_expr, eval_expr,
                             free_vars, render_expr)
from matrixcode.values import INT64_MAX, UNSET, EvalError


def b(op, left, right):
    return Binary(op, left, right)


def test_arithmetic_example():
    state = {"x": 3}
    assert eval_expr(state, b("+", Var("x"), IntLit(1))) == 4


def test_guard_comparison_example():
    # k >= N is false in the state the running example stops short of halting
    state = {"k": 2, "N": 3}
    assert eval_expr(state, b(">=", Var("k"), Var("N"))) is False


def test_indexing_example():
    state = {"p": [2, 3, 0], "k": 1}
    assert eval_expr(state, Index("p", Var("k"))) == 3


def test_eval_is_pure():
    state = {"p": [2, 3, 0], "k": 1}
    e = b("+", Index("p", Var("k")), Var("k"))
    first = eval_expr(state, e)
    second = eval_expr(state, e)
    assert first == second == 4
    assert state == {"p": [2, 3, 0], "k": 1}


@pytest.mark.parametrize("expr,message", [
    (Var("missing"), "unbound"),
    (Var("u"), "uninitialized"),
    (Index("p", IntLit(5)), "out of bounds"),
    (b("/", IntLit(1), IntLit(0)), "division by zero"),
    (b("%", IntLit(1), IntLit(0)), "division by zero"),
    (b("+", BoolLit(True), IntLit(1)), "expected an integer"),
    (b("and", IntLit(1), BoolLit(True)), "expected a boolean"),
    (b("==", IntLit(0), BoolLit(False)), "mismatched types"),
])
def test_errors_are_reported(expr, message):
    state = {"p": [1, 2], "u": UNSET}
    with pytest.raises(EvalError) as err:
        eval_expr(state, expr)
    assert message in str(err.value)


def test_error_names_the_variable():
    with pytest.raises(EvalError) as err:
        eval_expr({"q": UNSET}, Var("q", pos=(4, 7)))
    assert err.value.var == "q"
    assert "line 4 col 7" in str(err.value)


def test_overflow_is_an_error_not_wraparound():
    big = IntLit(INT64_MAX)
    with pytest.raises(EvalError) as err:
        eval_expr({}, b("+", big, IntLit(1)))
    assert "overflow" in str(err.value)


@pytest.mark.parametrize("a,bv,q,r", [
    (7, 2, 3, 1),
    (-7, 2, -3, -1),
    (7, -2, -3, 1),
    (-7, -2, 3, -1),
])
def test_division_truncates_toward_zero(a, bv, q, r):
    assert eval_expr({}, b("/", IntLit(a), IntLit(bv))) == q
    assert eval_expr({}, b("%", IntLit(a), IntLit(bv))) == r


def test_short_circuit_guards_out_of_range_reads():
    # k <= N fails first, so p[k-1] is never read
    state = {"k": 9, "N": 2, "p": [2, 3]}
    e = b("and", b("<=", Var("k"), Var("N")),
          b(">", Index("p", b("-", Var("k"), IntLit(1))), IntLit(0)))
    assert eval_expr(state, e) is False


def test_quantifiers_nest_and_shadow():
    # forall i in 0..2 (exists j in 0..2 (a[i] == j))
    e = Quant("forall", "i", IntLit(0), IntLit(2),
              Quant("exists", "j", IntLit(0), IntLit(2),
                    b("==", Index("a", Var("i")), Var("j"))))
    assert eval_expr({"a": [0, 1, 2]}, e) is True
    assert eval_expr({"a": [0, 1, 3]}, e) is False


def test_quantifier_empty_range():
    body = BoolLit(False)
    assert eval_expr({}, Quant("forall", "i", IntLit(1), IntLit(0), body)) is True
    assert eval_expr({}, Quant("exists", "i", IntLit(1), IntLit(0), body)) is False


def test_len_and_count_observe_streams():
    state = {"s": (1, 2, 2, 5)}
    assert eval_expr(state, Len("s")) == 4
    from matrixcode.expr import Count
    assert eval_expr(state, Count("s", IntLit(2))) == 2
    assert eval_expr(state, Index("s", IntLit(0))) == 1


def test_free_vars():
    e = Quant("forall", "i", IntLit(0), Var("k"),
              b("==", Index("p", Var("i")), Var("x")))
    assert free_vars(e) == {"k", "p", "x"}


def _random_expr(rng, depth=4):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([
            IntLit(rng.randint(-4, 4)),
            Var(rng.choice("xyz")),
            Index("a", IntLit(rng.randint(0, 2))),
        ])
    op = rng.choice(["+", "-", "*", "/", "%"])
    return Binary(op, _random_expr(rng, depth - 1), _random_expr(rng, depth - 1))


def _random_bool_expr(rng, depth=3):
    if depth == 0:
        left, right = _random_expr(rng, 2), _random_expr(rng, 2)
        return Binary(rng.choice(["==", "!=", "<", "<=", ">", ">="]), left, right)
    kind = rng.random()
    if kind < 0.4:
        return Binary(rng.choice(["and", "or"]),
                      _random_bool_expr(rng, depth - 1),
                      _random_bool_expr(rng, depth - 1))
    if kind < 0.5:
        return Unary("not", _random_bool_expr(rng, depth - 1))
    if kind < 0.65:
        return Quant(rng.choice(["forall", "exists"]), "q",
                     IntLit(rng.randint(-2, 1)), IntLit(rng.randint(-1, 2)),
                     Binary("!=", Var("q"), _random_expr(rng, 1)))
    return _random_bool_expr(rng, 0)


def test_compiled_matches_interpreted_on_random_expressions():
    # compile_expr is the verifier's fast path; eval_expr is the reference
    rng = random.Random(2024)
    for _ in range(400):
        e = _random_bool_expr(rng)
        state = {"x": rng.randint(-3, 3), "y": rng.randint(-3, 3),
                 "z": rng.randint(-3, 3),
                 "a": [rng.randint(-3, 3) for _ in range(3)]}
        fn = compile_expr(e)
        try:
            expected = eval_expr(state, e)
        except EvalError as exc:
            with pytest.raises(EvalError) as err:
                fn(state)
            assert err.value.message == exc.message
        else:
            assert fn(state) == expected


def test_render_round_trips_through_parser():
    from matrixcode.dsl import _Parser
    rng = random.Random(5)
    for _ in range(100):
        e = _random_bool_expr(rng)
        text = render_expr(e)
        parser = _Parser("dsm d { var x: int; start S; halt H; }", "<t>")
        parser.decl_types = {"x": "int", "y": "int", "z": "int", "a": "array"}
        parser.tokens = __import__("matrixcode.dsl", fromlist=["tokenize"]).tokenize(text)
        parser.i = 0
        reparsed = parser.parse_expr(cond_ctx=True, locals_=("q",))
        assert reparsed == e, text
