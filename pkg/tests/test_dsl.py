import pytest

from conftest import fixture_path

from matrixcode.dsl import ParseFailure, parse, parse_path, render_source, render_tabular
from matrixcode.matrix import validate

CORPUS_NAMES = ["primes", "primes0", "primes1", "primes2",
                "mrg0", "mrg1", "mrg2", "emerge", "turing", "decnum"]


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_parses_and_validates_clean(name, corpus):
    pf = corpus[name]
    assert validate(pf.matrix) == []


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_round_trip_is_identity_on_the_parsed_structure(name, corpus):
    first = corpus[name]
    second = parse(render_source(first), filename=name)
    assert second == first
    assert parse(render_source(second), filename=name) == first


def test_primes_shape(primes):
    m = primes.matrix
    assert set(m.states) == {"S", "A", "B", "C", "H"}
    assert sum(1 for rules in m.cells.values() if rules) == 7
    assert m.start == "S" and m.halt == "H"
    assert primes.vector is not None and set(primes.vector) == set(m.states)


def test_rule_order_is_preserved(corpus):
    m = corpus["decnum"].matrix
    outgoing = m.outgoing("B")
    assert [to for to, _ in outgoing] == ["B", "H"]  # greedy consume first


def failure_of(name):
    with pytest.raises(ParseFailure) as err:
        parse_path(fixture_path(name))
    return err.value.diagnostics


def test_cell_out_of_halt_is_a_located_error():
    diags = failure_of("bad_from_halt.mxc")
    assert any("halt" in d.message and "H -> A" in d.location for d in diags)


def test_cell_into_start_is_a_located_error():
    diags = failure_of("bad_into_start.mxc")
    assert any("start" in d.message for d in diags)


def test_undeclared_variable_is_a_located_error():
    diags = failure_of("bad_undeclared.mxc")
    (diag,) = [d for d in diags if "q" in d.message]
    assert "undeclared" in diag.message
    assert "bad_undeclared.mxc:5" in diag.location


def test_duplicate_control_state_is_an_error():
    diags = failure_of("bad_dup_state.mxc")
    assert any("duplicate control state" in d.message for d in diags)


def test_unknown_builtin_is_a_located_error():
    diags = failure_of("bad_builtin.mxc")
    assert any("unknown builtin" in d.message for d in diags)


def test_quantifier_in_guard_is_rejected():
    text = """
dsm bad {
  var x: int;
  start S;
  halt H;
  from S to H: [forall i in 0..2 (x != i)];
}
"""
    with pytest.raises(ParseFailure) as err:
        parse(text)
    assert any("only allowed in conditions" in d.message
               for d in err.value.diagnostics)


def test_partial_condition_vector_is_rejected():
    text = """
dsm bad {
  var x: int;
  start S;
  halt H;
  cond S: "s" is true;
  from S to A: [true];
  from A to H: [true];
}
"""
    with pytest.raises(ParseFailure) as err:
        parse(text)
    assert any("missing control state" in d.message for d in err.value.diagnostics)


def test_syntax_error_is_located():
    with pytest.raises(ParseFailure) as err:
        parse("dsm x {\n  start ;\n}")
    (diag,) = err.value.diagnostics
    assert ":2:" in diag.location


# -- tabular rendering ----------------------------------------------------------

def _table_shape(text):
    lines = text.strip("\n").split("\n")
    header = lines[0]
    columns = [c.strip() for c in header.rstrip("|").split("|") if c.strip()]
    rows = [line.rsplit("||", 1)[1].strip() for line in lines[2:]]
    return columns, [r.split(":")[0].strip() for r in rows]


def test_primes_table_layout(primes):
    columns, rows = _table_shape(render_tabular(primes.matrix, primes.vector))
    assert columns == ["C", "B", "A", "S"]
    assert rows == ["H", "A", "B", "C"]


def test_merge_table_layout(mrg2):
    columns, rows = _table_shape(render_tabular(mrg2.matrix))
    assert columns == ["G", "F", "E", "D", "C", "B", "A", "S"]
    assert rows == ["H", "A", "B", "C", "D", "E", "F", "G"]


def test_turing_table_layout(corpus):
    columns, rows = _table_shape(render_tabular(corpus["turing"].matrix))
    assert columns == ["Q2", "Q1", "Q0", "S"]
    assert rows == ["H", "Q0", "Q1", "Q2"]


def test_single_cell_table_is_one_by_one():
    pf = parse_path(fixture_path("tiny.mxc"))
    columns, rows = _table_shape(render_tabular(pf.matrix))
    assert columns == ["S"]
    assert rows == ["H"]


def test_row_labels_carry_condition_labels(primes):
    text = render_tabular(primes.matrix, primes.vector)
    assert "H: p[0..N-1] holds the first N primes" in text
