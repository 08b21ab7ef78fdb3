from fractions import Fraction

import pytest

from nilcontact.catalog import (
    CATALOG_FILES,
    catalog_dir,
    dims_from_label,
    embedded_catalog,
    parse_entries,
    verify,
    verify_entry,
)
from nilcontact.catalog.dsl import ParseError, parse, parse_constraint, parse_expression, render
from nilcontact.scalars import UniPoly

LAM = UniPoly.lam()


def test_parse_simple():
    (e,) = parse('algebra "heis3" dim 3 {\n  [1,2] = 3;\n}\n')
    assert e.id == "heis3"
    assert e.algebra.bracket(1, 2) == (0, 0, 1)
    assert not e.parametric


def test_parse_family_header():
    src = 'family "f" dim 3 param t exclude { 0, 1 } constraint "t > 1/2" {\n  [1,2] = (1 - t)*3;\n}\n'
    (e,) = parse(src)
    assert e.algebra.param == "t"
    assert e.algebra.bracket(1, 2)[2] == 1 - LAM
    assert e.excluded == {0, 1}
    assert e.constraint == "t > 1/2"


def test_parse_coefficients():
    (e,) = parse('algebra "c" dim 4 {\n  [1,2] = -1/2*3 + 2*4;\n  [1,3] = -4;\n}\n')
    assert e.algebra.bracket(1, 2) == (0, 0, Fraction(-1, 2), 2)
    assert e.algebra.bracket(1, 3) == (0, 0, 0, -1)


def test_comments_and_blank_lines():
    src = "# header\n\nalgebra \"a\" dim 2 { }  # trailing\n"
    (e,) = parse(src)
    assert e.algebra.is_abelian()


def test_expressions():
    assert parse_expression("lambda + lambda^(-1)", "lambda") == (LAM * LAM + 1, LAM)
    assert parse_expression("(1 - t + t^2)^3 / (t^2*(t - 1)^2)", "t")[1] == (LAM * (LAM - 1)) ** 2
    assert parse_expression("6/4", "t") == (UniPoly.constant(Fraction(3, 2)), UniPoly.constant(1))


def test_constraints():
    assert parse_constraint("lambda >= 0", "lambda") == ((">=", 0),)
    assert parse_constraint("", "lambda") == ()
    with pytest.raises(ValueError):
        parse_constraint("mu > 1", "lambda")


@pytest.mark.parametrize(
    "source, line, column, token, message",
    [
        ('algebra "a" dim 3 { }\nalgebra "a" dim 3 { }', 2, 1, "algebra", "duplicate entry id"),
        ('algebra "a" dim 3 {\n  [1,2] = 3;\n  [1,2] = 3;\n}', 3, 3, "[", "duplicate bracket"),
        ('algebra "a" dim 3 {\n  [1,4] = 3;\n}', 2, 6, "4", "out of range"),
        ('algebra "a" dim 3 {\n  [2,1] = 3;\n}', 2, 4, "2", "i < j"),
        ('algebra "a" dim 3 {\n  [1,2] = 1/0*3;\n}', 2, 13, "0", "zero denominator"),
        ('algebra "a" dim 3 {\n  [1,2] = mu*3;\n}', 2, 11, "mu", "unknown identifier"),
        ('algebra "a" dim 3 {\n  [1,2] = 3\n}', 3, 1, "}", "expected ';'"),
    ],
)
def test_parse_errors(source, line, column, token, message):
    with pytest.raises(ParseError) as info:
        parse(source)
    err = info.value
    assert (err.line, err.column, err.token) == (line, column, token)
    assert message in err.message


def test_unterminated_input():
    with pytest.raises(ParseError) as info:
        parse('algebra "a" dim 3 {')
    assert info.value.token is None


def test_round_trip_embedded_catalog():
    for name in CATALOG_FILES:
        defs = parse((catalog_dir() / name).read_text())
        assert parse(render(defs)) == defs


def test_catalog_counts(catalog):
    dims = [e.algebra.dim for e in catalog]
    assert (dims.count(7), dims.count(5), dims.count(3)) == (44, 3, 2)
    assert len({e.id for e in catalog}) == len(catalog)
    assert sum(e.parametric for e in catalog) == 9


def test_label_digits():
    assert dims_from_label("1357QRS1", 7) == (1, 3, 5, 7)
    assert dims_from_label("12457N2", 7) == (1, 2, 4, 5, 7)
    assert dims_from_label("heis3", 3) is None


def test_expected_witnesses(by_id):
    assert by_id["12457L"].expected_witness == (0, 0, 0, 0, 0, 1, 1)
    assert by_id["1357C"].expected_witness == (0,) * 6 + (1,)
    assert by_id["L5,1"].expected_witness == (0,) * 4 + (1,)
    assert by_id["1357C"].expected_top_coefficient == 6


def test_sample_lambdas(by_id):
    assert by_id["147E"].sample_lambdas() == (2, 3, Fraction(1, 2))
    assert by_id["147E1"].sample_lambdas() == (2, 3, Fraction(5, 2))
    assert by_id["12457N2"].admissible(0) and not by_id["12457N2"].admissible(-1)


def test_verification_is_deterministic(catalog):
    assert verify(catalog).to_json() == verify(catalog).to_json()


def test_verify_empty():
    res = verify([])
    assert res.ok and res.summary() == "0/0 entries pass"


def test_mutated_entry_is_flagged():
    src = (catalog_dir() / "dim7.nla").read_text()
    start = src.index('algebra "1357C"')
    end = src.index("}", start)
    body = src[start:end]
    assert "[3,6] = 7;" in body
    mutated = src[:start] + body.replace("  [3,6] = 7;\n", "") + src[end:]
    entry = next(e for e in parse_entries(mutated) if e.id == "1357C")
    res = verify_entry(entry)
    assert not res.passed
    assert res.failures


def test_jacobi_failure_is_recorded_not_raised():
    (entry,) = parse_entries('algebra "bad" dim 3 {\n  [1,2] = 3;\n  [1,3] = 1;\n}\n')
    res = verify_entry(entry)
    assert not res.jacobi_ok and (1, 2, 3) in res.defects


def test_embedded_catalog_env_override(tmp_path, monkeypatch):
    for name in CATALOG_FILES:
        (tmp_path / name).write_text((catalog_dir() / name).read_text())
    monkeypatch.setenv("NILCONTACT_CATALOG_DIR", str(tmp_path))
    (tmp_path / "dim3.nla").write_text('algebra "heis3" dim 3 {\n  [1,2] = 3;\n}\n')
    assert len(embedded_catalog()) == 48


def test_known_discrepancies_are_reported(catalog):
    res = verify(catalog)
    assert {e.id for e in res.entries if not e.passed} == {"12457L", "12457N"}
    assert res.summary() == "47/49 entries pass"
    assert any("admissible lambda = 1" in f for f in res["12457N"].failures)
    assert any("1357N" == e.id and e.notes for e in res.entries)
