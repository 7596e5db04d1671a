import pytest

from conftest import golden_path, initial_state
from oracles import emerge_oracle, first_n_primes, mmerge_oracle, turing_oracle

import matrixcode as mc
from matrixcode.interpreter import (FAILURE, STEP_LIMIT, SUCCESS,
                                    Configuration, step)
from matrixcode.values import UNSET, freeze_state


def merge_state(matrix, left, right):
    from matrixcode.cli import merge_inputs
    return merge_inputs(matrix, tuple(left), tuple(right))


# -- step ----------------------------------------------------------------------

def test_first_step_of_the_prime_machine(primes):
    d0 = initial_state(primes.matrix, N=3)
    (succ,) = step(primes.matrix, Configuration("S", d0), "det")
    assert succ.control == "A"
    assert succ.data["k"] == 2
    assert succ.data["p"] == [2, 3, UNSET]


def test_null_matrix_has_no_successor(corpus):
    m = corpus["primes0"].matrix
    d0 = initial_state(m, N=3)
    assert step(m, Configuration("S", d0), "det") == []
    assert step(m, Configuration("S", d0), "all") == []


def test_all_policy_step_lists_every_enabled_cell(corpus):
    m = corpus["decnum"].matrix
    st = initial_state(m, left=[2, 3])
    st["c"] = 9
    succ = step(m, Configuration("B", st), "all")
    got = sorted((c.control, c.data["left"]) for c in succ)
    assert got == [("B", (3,)), ("H", (2, 3))]


# -- run -----------------------------------------------------------------------

def test_prime_run_reproduces_the_reference_computation(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=3))
    assert out.status == SUCCESS
    assert out.trace.controls == ["S", "A", "B", "C", "B", "A", "H"]
    final = out.trace.final.data
    assert final["k"] == 3 and final["j"] == 5 and final["n"] == 1
    assert final["p"] == [2, 3, 5]


def test_prime_run_matches_trial_division_for_small_n(primes):
    for n in range(2, 15):
        out = mc.run(primes.matrix, initial_state(primes.matrix, N=n))
        assert out.status == SUCCESS
        assert out.trace.final.data["p"] == first_n_primes(n)


def test_null_matrix_fails_immediately(corpus):
    m = corpus["primes0"].matrix
    out = mc.run(m, initial_state(m, N=3))
    assert out.status == FAILURE
    assert len(out.trace.configs) == 1


def test_step_bound_is_reported_distinctly(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=3), step_bound=2)
    assert out.status == STEP_LIMIT
    assert out.trace.controls == ["S", "A", "B"]


@pytest.mark.parametrize("opens,closes,expected_tail", [
    (6, 4, None),   # unbalanced: oracle decides
    (5, 5, None),
])
def test_turing_runs_agree_with_quintuple_oracle(corpus, opens, closes, expected_tail):
    text = "A" + "(" * opens + ")" * closes + "A"
    m = corpus["turing"].matrix
    from matrixcode.cli import build_initial_state
    d0 = build_initial_state(m, {"t": "tape[%s]@1" % text})
    out = mc.run(m, d0)
    assert out.status == SUCCESS
    assert out.trace.final.data["t"].render() == turing_oracle(text)


def test_turing_reference_tapes(corpus):
    m = corpus["turing"].matrix
    from matrixcode.cli import build_initial_state
    cases = [
        ("A" + "(" * 6 + ")" * 4 + "A", "A ( 0 X X X X X X X X A"),
        ("A((((()))()))A", "1 X X X X X X X X X X X X A"),
    ]
    for text, expected in cases:
        d0 = build_initial_state(m, {"t": "tape[%s]@1" % text})
        out = mc.run(m, d0)
        assert out.status == SUCCESS
        assert out.trace.final.data["t"].render() == expected


# -- enumerate -------------------------------------------------------------------

def test_enumerate_decnum_finds_all_acceptances(corpus):
    m = corpus["decnum"].matrix
    outcomes = mc.enumerate_runs(m, initial_state(m, left=[-1, 1, 2, 3]), 12)
    wins = [o for o in outcomes if o.status == SUCCESS]
    assert len(wins) == 3
    leftovers = sorted(o.trace.final.data["left"] for o in wins)
    assert leftovers == sorted([(), (3,), (2, 3)])


def test_enumerate_deterministic_matrix_is_singleton(primes):
    outcomes = mc.enumerate_runs(primes.matrix, initial_state(primes.matrix, N=3), 20)
    assert len(outcomes) == 1
    assert outcomes[0].status == SUCCESS
    assert outcomes[0].trace.controls == ["S", "A", "B", "C", "B", "A", "H"]


def test_enumerate_null_matrix_is_one_failed_empty_computation(corpus):
    m = corpus["primes0"].matrix
    outcomes = mc.enumerate_runs(m, initial_state(m, N=3), 5)
    assert len(outcomes) == 1
    assert outcomes[0].status == FAILURE
    assert len(outcomes[0].trace.configs) == 1


def test_deterministic_run_is_among_enumerated_runs(corpus):
    m = corpus["decnum"].matrix
    d0 = initial_state(m, left=[1, 2])
    det = mc.run(m, d0)
    enumerated = mc.enumerate_runs(m, d0, 10)
    det_key = [c.key() for c in det.trace.configs]
    assert det_key in [[c.key() for c in o.trace.configs] for o in enumerated]


def test_exclusive_guard_machines_enumerate_to_their_run(corpus):
    from matrixcode.cli import build_initial_state
    turing = corpus["turing"].matrix
    cases = [
        ("primes", initial_state(corpus["primes"].matrix, N=4)),
        ("turing", build_initial_state(turing, {"t": "tape[A(())A]@1"})),
    ]
    for name, d0 in cases:
        m = corpus[name].matrix
        det = mc.run(m, d0)
        outcomes = mc.enumerate_runs(m, d0, 100)
        assert len(outcomes) == 1, name
        assert [c.key() for c in outcomes[0].trace.configs] \
            == [c.key() for c in det.trace.configs]


# -- counters and revisits ---------------------------------------------------------

def test_merge_counters_on_the_worked_example(mrg2):
    out = mc.run(mrg2.matrix, merge_state(mrg2.matrix, [1, 3], [2]))
    c = out.trace.counters
    assert (c["getL"], c["getR"], c["putL"], c["putR"]) == (3, 2, 2, 1)
    assert out.trace.final.data["out"] == (1, 2, 3)


def test_structured_merge_counters_on_the_worked_example(corpus):
    m = corpus["emerge"].matrix
    out = mc.run(m, merge_state(m, [1, 3], [2]))
    c = out.trace.counters
    expected_out, expected_counts = emerge_oracle([1, 3], [2])
    assert out.trace.final.data["out"] == expected_out == (1, 2, 3)
    assert {k: c[k] for k in expected_counts} == expected_counts
    assert (c["getL"], c["getR"], c["putL"], c["putR"]) == (5, 4, 2, 1)


def test_merge_counters_match_transcription_oracles(corpus, mrg2):
    import random
    rng = random.Random(6)
    emerge = corpus["emerge"].matrix
    for _ in range(40):
        from matrixcode.cli import random_stream
        left = random_stream(rng, max_len=12)
        right = random_stream(rng, max_len=12)
        for m, oracle in ((mrg2.matrix, mmerge_oracle), (emerge, emerge_oracle)):
            out = mc.run(m, merge_state(m, left, right))
            expected_out, expected_counts = oracle(left, right)
            assert out.trace.final.data["out"] == expected_out
            got = {k: out.trace.counters[k] for k in expected_counts}
            assert got == expected_counts, (left, right, m.name)


def test_empty_streams_move_nothing(mrg2):
    out = mc.run(mrg2.matrix, merge_state(mrg2.matrix, [], []))
    assert out.status == SUCCESS
    c = out.trace.counters
    assert c["putL"] == 0 and c["putR"] == 0


def test_count_calls_returns_the_counter_map(mrg2):
    out = mc.run(mrg2.matrix, merge_state(mrg2.matrix, [1], []))
    assert mc.count_calls(out.trace) == out.trace.counters


def test_revisits_count_occurrences_in_the_control_sequence(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=3))
    assert out.trace.revisits == {"S": 1, "A": 2, "B": 2, "C": 1, "H": 1}


def test_revisits_property_on_longer_runs(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=9))
    controls = out.trace.controls
    for k, count in out.trace.revisits.items():
        assert controls.count(k) == count


# -- trace rendering ------------------------------------------------------------

def test_trace_table_matches_golden(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=3))
    text = mc.render_trace(primes.matrix, out.trace)
    assert text == golden_path("primes_trace_N3.txt").read_text()


def test_adjacent_trace_configurations_are_transitions(primes):
    out = mc.run(primes.matrix, initial_state(primes.matrix, N=5))
    for before, after in zip(out.trace.configs, out.trace.configs[1:]):
        images = []
        for to, rule in primes.matrix.outgoing(before.control):
            if to == after.control:
                images.extend(mc.image(rule, before.data))
        assert any(freeze_state(d) == freeze_state(after.data) for d in images)


def test_multi_valued_rule_is_an_error_under_deterministic_policy():
    from matrixcode.dsl import parse
    pf = parse("""
dsm fork {
  var x: int;
  start S;
  halt H;
  from S to H: { x = 1 } | { x = 2 };
}
""")
    # two rules are scanned in order: fine deterministically
    assert mc.run(pf.matrix, {"x": 0}).trace.final.data["x"] == 1
    # one rule whose own image is two states is not
    from matrixcode.relations import Assign, Union
    from matrixcode.expr import IntLit
    branch = Union(Assign(((("var", "x"), IntLit(1)),)),
                   Assign(((("var", "x"), IntLit(2)),)))
    pf.matrix.cells[("S", "H")] = (branch,)
    with pytest.raises(mc.ExecutionError) as err:
        mc.run(pf.matrix, {"x": 0})
    assert "non-singleton" in str(err.value)
    assert len(mc.enumerate_runs(pf.matrix, {"x": 0}, 5)) == 2  # all-policy is fine


def test_execution_error_carries_partial_trace():
    from matrixcode.dsl import parse
    pf = parse("""
dsm boom {
  var x: int;
  start S;
  halt H;
  from S to A: { x = 1 };
  from A to H: [x / (x - 1) > 0];
}
""")
    with pytest.raises(mc.ExecutionError) as err:
        mc.run(pf.matrix, {"x": 0})
    assert "division by zero" in str(err.value)
    assert err.value.trace.controls == ["S", "A"]
