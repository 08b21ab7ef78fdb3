import random
from fractions import Fraction

import pytest

from nilcontact.contact import (
    CONTACT,
    DEPENDS,
    NO_CONTACT,
    DomainError,
    FamilyInvariant,
    candidate_forms,
    contact_value,
    family_analysis,
    find_contact_form,
    format_one_form,
    generic_contact_polynomial,
    invariant_value,
    is_exceptional,
)
from nilcontact.liealg import JacobiError, LieAlgebra, ParametricError, abelian, specialize
from nilcontact.scalars import MultiPoly, UniPoly, evaluate

LAM = UniPoly.lam()
E7 = (0,) * 6 + (1,)


def unit(n, *idx):
    return tuple(Fraction(int(i in idx)) for i in range(1, n + 1))


def test_generic_polynomial_examples():
    assert not generic_contact_polynomial(abelian(5))
    a3 = MultiPoly.variable(3, 3)
    assert generic_contact_polynomial(LieAlgebra(3, {(1, 2): {3: 1}})) == a3 * a3
    a5 = MultiPoly.variable(5, 5)
    l51 = LieAlgebra(5, {(1, 2): {5: 1}, (3, 4): {5: 1}})
    assert generic_contact_polynomial(l51) == a5 * a5 * a5 * 2


def test_generic_polynomial_errors():
    with pytest.raises(ValueError, match="odd"):
        generic_contact_polynomial(abelian(4))
    with pytest.raises(JacobiError):
        generic_contact_polynomial(LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {1: 1}}))


def test_contact_value_anchors(by_id):
    assert contact_value(by_id["1357C"].algebra, E7) == 6
    assert contact_value(by_id["147E"].algebra, E7) == 6 * LAM * (1 - LAM)
    assert contact_value(by_id["1357C"].algebra, (0,) * 7) == 0


def test_contact_value_length_check(by_id):
    with pytest.raises(ValueError, match="expected 7"):
        contact_value(by_id["1357C"].algebra, (1, 2))


def test_12457L_as_shipped(by_id):
    # x7 fails as expected, but the shipped bracket table has P = 0, so x6 + x7
    # fails too (see the README's known failures)
    g = by_id["12457L"].algebra
    assert contact_value(g, E7) == 0
    assert contact_value(g, unit(7, 6, 7)) == 0
    assert not generic_contact_polynomial(g)
    assert find_contact_form(g).verdict == NO_CONTACT


def test_default_witness_is_x_n(catalog):
    for e in catalog:
        if e.parametric or e.id in ("12457L", "abelian3"):
            continue
        rep = find_contact_form(e.algebra)
        assert rep.verdict == CONTACT
        assert rep.witness == unit(e.algebra.dim, e.algebra.dim), e.id


def test_no_contact_report():
    rep = find_contact_form(abelian(3))
    assert rep.verdict == NO_CONTACT and rep.witness is None
    assert rep.witness_text() == "-"


def test_find_contact_form_rejects_families(by_id):
    with pytest.raises(ParametricError):
        find_contact_form(by_id["147E"].algebra)
    with pytest.raises(ParametricError):
        family_analysis(by_id["1357C"].algebra)


def test_family_analysis_147E(by_id):
    rep = family_analysis(by_id["147E"].algebra)
    assert rep.verdict == DEPENDS
    assert rep.exceptional_rational == {0, 1}
    assert rep.exceptional_residual == 1
    assert rep.witness == E7
    # both readings of "exceptional" agree here: the x7 witness fails exactly where P does
    for lam in (0, 1):
        assert is_exceptional(by_id["147E"].algebra, lam)
    assert not is_exceptional(by_id["147E"].algebra, 2)


def test_family_without_exceptions(by_id):
    rep = family_analysis(by_id["12457N2"].algebra)
    assert rep.verdict == CONTACT
    assert rep.exceptional_rational == set()


def test_family_exceptional_sets(catalog):
    for e in catalog:
        if not e.parametric:
            continue
        rep = family_analysis(e.algebra)
        for lam in rep.exceptional_rational:
            assert not generic_contact_polynomial(specialize(e.algebra, lam)), (e.id, lam)
        for lam in (Fraction(7, 3), Fraction(-5, 2)):
            if lam not in rep.exceptional_rational:
                assert generic_contact_polynomial(specialize(e.algebra, lam)), (e.id, lam)


def test_specialization_commutes_on_families(catalog):
    families = [e for e in catalog if e.parametric]
    assert len(families) == 9
    for e in families:
        p = generic_contact_polynomial(e.algebra)
        for lam in (Fraction(2), Fraction(-1, 3), Fraction(0)):
            assert generic_contact_polynomial(specialize(e.algebra, lam)) == p.specialize(lam), (e.id, lam)


def test_homogeneity_in_dimension_7(catalog):
    rng = random.Random(7)
    for e in catalog:
        if e.algebra.dim != 7:
            continue
        p = generic_contact_polynomial(e.algebra)
        assert p.is_homogeneous() and p.total_degree() in (4, -1)
        a = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(7)]
        c = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
        lam = Fraction(2) if e.parametric else None
        lhs = evaluate(p, lam, [c * x for x in a])
        assert lhs == evaluate(p, lam, a) * c**4


def test_witness_is_verified_by_oracle(catalog):
    for e in catalog:
        if e.parametric or e.id in ("abelian3", "12457L"):
            continue
        rep = find_contact_form(e.algebra)
        assert contact_value(e.algebra, rep.witness) == rep.top_coefficient != 0


def test_candidate_order():
    cands = list(candidate_forms(3))
    assert cands[:3] == [unit(3, 3), unit(3, 2), unit(3, 1)]
    assert cands[3] == (0, 1, 1)
    assert len(set(cands)) == len(cands)


def test_format_one_form():
    assert format_one_form(unit(7, 6, 7)) == "x7+x6"
    assert format_one_form((Fraction(-1, 2), 0, 2)) == "2x3-1/2x1"
    assert format_one_form((0, 0)) == "0"


def test_invariant_values(by_id):
    inv = by_id["147E"].family_invariant
    assert invariant_value(inv, 2) == invariant_value(inv, -1) == Fraction(27, 4)
    q = by_id["1357QRS1"].family_invariant
    assert invariant_value(q, 2) == invariant_value(q, Fraction(1, 2)) == Fraction(5, 2)
    assert {0, 1} <= inv.excluded


def test_invariant_domain():
    inv = FamilyInvariant(UniPoly.constant(1), LAM * (LAM - 1))
    assert inv.excluded == {0, 1}
    with pytest.raises(DomainError):
        invariant_value(inv, 1)
    with pytest.raises(ValueError):
        FamilyInvariant(UniPoly.constant(1), UniPoly())


def test_report_json(by_id):
    body = family_analysis(by_id["147E"].algebra).to_json()
    assert body["verdict"] == DEPENDS
    assert body["exceptional_lambda"] == {"rational": ["0", "1"], "residual": ["1"]}
    assert body["witness"] == ["0"] * 6 + ["1"]
