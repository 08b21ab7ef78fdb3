import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_nilpotent
from nilcontact.catalog import RATIONAL_BASIS_KNOWN
from nilcontact.exterior import ExteriorElement
from nilcontact.liealg import (
    JacobiError,
    LieAlgebra,
    ParametricError,
    abelian,
    basis_aligned_decomposable,
    ce_differential,
    cover_criterion,
    d,
    direct_sum,
    jacobi_defect,
    lower_central_series,
    rational_in_given_basis,
    relabel,
    specialize,
    upper_central_series,
)
from nilcontact.scalars import UniPoly

LAM = UniPoly.lam()
BROKEN = LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {1: 1}})
HEIS3 = LieAlgebra(3, {(1, 2): {3: 1}})
L51 = LieAlgebra(5, {(1, 2): {5: 1}, (3, 4): {5: 1}})


def blade(n, *idx, c=1):
    return ExteriorElement.blade(n, idx, c)


def test_jacobi_examples(by_id):
    assert jacobi_defect(by_id["1357C"].algebra) == {}
    assert jacobi_defect(abelian(7)) == {}
    assert jacobi_defect(BROKEN) == {(1, 2, 3): (0, 0, -1)}


def test_jacobi_error_carries_defects():
    with pytest.raises(JacobiError) as info:
        ce_differential(BROKEN)
    assert info.value.defects == {(1, 2, 3): (0, 0, -1)}
    with pytest.raises(JacobiError):
        d(BROKEN, ExteriorElement.generator(3, 3))


def test_constructor_validation():
    with pytest.raises(ValueError):
        LieAlgebra(3, {(2, 1): {3: 1}})
    with pytest.raises(IndexError):
        LieAlgebra(3, {(1, 4): {3: 1}})
    g = LieAlgebra(3, {(1, 2): {3: 0}})
    assert g.is_abelian()


def test_ce_differential_1357C(by_id):
    dx = ce_differential(by_id["1357C"].algebra)
    assert dx[5] == blade(7, 2, 3) + blade(7, 1, 4)
    assert dx[7] == blade(7, 1, 5) + blade(7, 2, 4) - blade(7, 3, 4) + blade(7, 3, 6)
    assert not dx[1] and not dx[2]


def test_ce_differential_147E(by_id):
    dx = ce_differential(by_id["147E"].algebra)
    assert dx[6] == blade(7, 1, 3, c=-1)
    assert dx[7] == blade(7, 2, 6, c=LAM) + blade(7, 3, 4, c=1 - LAM) + blade(7, 1, 5, c=-1)


def test_ce_differential_abelian():
    assert all(not v for v in ce_differential(abelian(5)).values())


def test_d_examples(by_id):
    g = by_id["1357C"].algebra
    assert not d(g, blade(7, 1, 2))
    assert not d(g, d(g, ExteriorElement.generator(7, 7)))
    assert not d(g, ExteriorElement.unit(7))


def test_d_squared_detects_broken_jacobi():
    dx3 = d(BROKEN, ExteriorElement.generator(3, 3), check=False)
    assert d(BROKEN, dx3, check=False)


def test_d_squared_vanishes_on_catalog(catalog):
    for e in catalog:
        g = e.algebra
        for k in range(1, g.dim + 1):
            assert not d(g, d(g, ExteriorElement.generator(g.dim, k))), (e.id, k)


@st.composite
def homogeneous(draw, n):
    p = draw(st.integers(0, 3))
    subsets = list(combinations(range(1, n + 1), p))
    chosen = draw(st.lists(st.sampled_from(subsets), max_size=3, unique=True))
    out = ExteriorElement.zero(n)
    for idx in chosen:
        out = out + ExteriorElement.blade(n, idx, Fraction(draw(st.integers(-2, 2))))
    return out, p


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_derivation_law(catalog, data):
    g = data.draw(st.sampled_from(catalog)).algebra
    (u, p), (v, _) = data.draw(homogeneous(g.dim)), data.draw(homogeneous(g.dim))
    assert d(g, u ^ v) == (d(g, u) ^ v) + (u ^ d(g, v)) * (-1) ** p


def test_series_examples(by_id):
    assert upper_central_series(by_id["1357C"].algebra).upper_dims == (1, 3, 5, 7)
    ab = upper_central_series(abelian(7))
    assert ab.upper_dims == (7,) and ab.nilpotency_index == 1
    assert upper_central_series(HEIS3).upper_dims == (1, 3)
    assert lower_central_series(HEIS3) == (3, 1, 0)


def test_series_not_nilpotent():
    # [X1,X2]=X2 is solvable, not nilpotent
    rep = upper_central_series(LieAlgebra(2, {(1, 2): {2: 1}}))
    assert not rep.nilpotent
    assert rep.nilpotency_index is None


def test_series_requires_rational(by_id):
    with pytest.raises(ParametricError, match="specialize"):
        upper_central_series(by_id["147E"].algebra)


def _sympy_upper_dims(g):
    """Upper central series through sympy nullspaces, as an independent oracle."""
    sympy = pytest.importorskip("sympy")
    n = g.dim
    basis = []  # rows spanning C_i
    dims = []
    while True:
        cur = sympy.Matrix(basis) if basis else sympy.zeros(0, n)
        rows = []
        for j in range(1, n + 1):
            # x -> [x, X_j] modulo span(basis)
            m = sympy.Matrix([[g.bracket(i, j)[k] for k in range(n)] for i in range(1, n + 1)]).T
            rows.append(m)
        # x in C_{i+1}  iff  [x, X_j] = sum t * basis rows, for every j
        blocks = []
        for m in rows:
            blocks.append(m.row_join(-cur.T) if basis else m)
        nb = len(basis)
        big = sympy.zeros(0, n + nb * n)
        for idx, blk in enumerate(blocks):
            row = sympy.zeros(n, n + nb * n)
            row[:, :n] = blk[:, :n]
            if nb:
                row[:, n + idx * nb:n + (idx + 1) * nb] = blk[:, n:]
            big = big.col_join(row)
        null = big.nullspace()
        space = sympy.Matrix.hstack(*[v[:n, 0] for v in null]) if null else sympy.zeros(n, 0)
        rank = space.rank() if null else 0
        if dims and rank == dims[-1]:
            return tuple(dims)
        dims.append(rank)
        basis = [list(space.T.row(r)) for r in range(space.shape[1])] if null else []
        if rank == n:
            return tuple(dims)


def test_series_against_sympy(catalog, rng):
    algebras = [e.algebra for e in catalog if not e.parametric]
    algebras += [random_nilpotent(rng, rng.choice((5, 6, 7))) for _ in range(10)]
    for g in algebras:
        assert upper_central_series(g).upper_dims == _sympy_upper_dims(g)


def test_series_terminal_value_is_dimension(catalog):
    for e in catalog:
        g = e.algebra if not e.parametric else specialize(e.algebra, e.sample_lambdas()[0])
        dims = upper_central_series(g).upper_dims
        assert dims[-1] == g.dim
        assert list(dims) == sorted(set(dims))


def test_specialize_examples(by_id):
    g = specialize(by_id["147E"].algebra, 2)
    assert g.bracket(2, 6) == (0,) * 6 + (2,)
    assert g.bracket(3, 4) == (0,) * 6 + (-1,)
    assert not g.parametric
    m = specialize(by_id["1357M"].algebra, 0)
    assert (2, 6) not in m.brackets
    assert m.bracket(3, 4) == (0,) * 6 + (1,)
    with pytest.raises(ParametricError):
        specialize(by_id["1357C"].algebra, 2)


def test_direct_sum_examples():
    g = direct_sum(HEIS3, abelian(4))
    assert g.dim == 7 and g.brackets == {(1, 2): (0, 0, 1, 0, 0, 0, 0)}
    assert direct_sum(abelian(2), abelian(3)) == abelian(5)
    h = direct_sum(L51, abelian(2))
    assert h.format_brackets() == ["[X1,X2]=X5", "[X3,X4]=X5"]


def test_direct_sum_is_decomposable(rng):
    for _ in range(20):
        a, b = rng.randint(1, 5), rng.randint(1, 4)
        g = direct_sum(random_nilpotent(rng, a), random_nilpotent(rng, b))
        assert basis_aligned_decomposable(g) is not None


def test_cover_examples(by_id):
    assert cover_criterion(LieAlgebra(7, {(1, 2): {7: 1}})) is None
    w = cover_criterion(by_id["1357C"].algebra)
    assert w.pairs == ((1, 5), (2, 4), (3, 6)) and w.singleton == 7
    assert cover_criterion(abelian(7)) is None
    with pytest.raises(ValueError, match="odd"):
        cover_criterion(abelian(6))


def test_cover_special_case_on_catalog(catalog):
    # every shipped dim-7 entry has a cover of {1..6} with the left-out index 7
    for e in catalog:
        if e.algebra.dim == 7:
            assert cover_criterion(e.algebra).singleton == 7, e.id


def test_decomposable_examples(by_id):
    assert basis_aligned_decomposable(direct_sum(HEIS3, abelian(4))) == ((1, 2, 3), (4, 5, 6, 7))
    assert basis_aligned_decomposable(by_id["1357C"].algebra) is None
    assert basis_aligned_decomposable(abelian(7)) == ((1,), (2, 3, 4, 5, 6, 7))


def test_rational_in_given_basis(by_id, catalog):
    assert rational_in_given_basis(by_id["1357C"].algebra)
    assert rational_in_given_basis(by_id["147E"].algebra, Fraction(3, 2))
    assert not rational_in_given_basis(by_id["147E"].algebra)
    assert RATIONAL_BASIS_KNOWN == {e.id for e in catalog if not e.parametric}


@given(st.integers(0, 2**32), st.permutations(list(range(1, 8))))
@settings(max_examples=40, deadline=None)
def test_relabeling_invariance(seed, perm):
    g = random_nilpotent(random.Random(seed), 7)
    h = relabel(g, perm)
    assert (jacobi_defect(h) == {}) == (jacobi_defect(g) == {})
    assert (cover_criterion(h) is None) == (cover_criterion(g) is None)
    assert sorted(upper_central_series(h).upper_dims) == sorted(upper_central_series(g).upper_dims)


def test_relabel_keeps_broken_broken():
    assert jacobi_defect(relabel(BROKEN, [3, 1, 2]))
