"""Deciding whether a Lie algebra carries a contact form.

For ``dim = 2m + 1`` a 1-form ``η`` is a contact form when the top-degree
coefficient of ``η ∧ (dη)^m`` is nonzero. Writing ``η = sum a_i x_i`` with
symbolic ``a_i`` turns that coefficient into a homogeneous polynomial
``P(a)`` of degree ``m + 1``; a contact form exists iff ``P`` is not the zero
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exterior import ExteriorElement
from .liealg import LieAlgebra, ParametricError, ce_differential, d, specialize
from .scalars import (
    MultiPoly,
    UniPoly,
    as_rational,
    format_rational,
    rational_roots,
    unipoly_gcd,
)

CONTACT = "contact"
NO_CONTACT = "no-contact"
DEPENDS = "depends-on-lambda"


def _half_dim(g: LieAlgebra) -> int:
    if g.dim % 2 == 0:
        raise ValueError(f"contact structures need odd dimension, got {g.dim}")
    return (g.dim - 1) // 2


def generic_contact_polynomial(g: LieAlgebra) -> MultiPoly:
    """Top coefficient of ``ω ∧ (dω)^m`` for ``ω = a1 x1 + ... + an xn``."""
    m = _half_dim(g)
    n = g.dim
    dx = ce_differential(g)
    a = [MultiPoly.variable(i, n) for i in range(1, n + 1)]
    omega = ExteriorElement(n, {1 << (i - 1): a[i - 1] for i in range(1, n + 1)})
    d_omega = ExteriorElement.zero(n)
    for i in range(1, n + 1):
        if dx[i]:
            d_omega = d_omega + dx[i].scale(a[i - 1])
    top = omega.wedge(d_omega.power(m)).top_coefficient()
    if not isinstance(top, MultiPoly):
        return MultiPoly(n)
    return top


def contact_value(g: LieAlgebra, coeffs: Sequence):
    """Top coefficient of ``η ∧ (dη)^m`` for the concrete form ``η = sum coeffs_i x_i``.

    Works straight from the derivation ``d`` on the given 1-form, so it is an
    independent check on :func:`generic_contact_polynomial`.
    """
    m = _half_dim(g)
    if len(coeffs) != g.dim:
        raise ValueError(f"expected {g.dim} coefficients, got {len(coeffs)}")
    coeffs = [c if isinstance(c, UniPoly) else as_rational(c) for c in coeffs]
    eta = ExteriorElement.one_form(coeffs)
    value = eta.wedge(d(g, eta).power(m)).top_coefficient()
    if g.parametric and not isinstance(value, UniPoly):
        value = UniPoly.constant(value)
    return value


@dataclass
class ContactReport:
    verdict: str
    witness: tuple[Fraction, ...] | None = None
    top_coefficient: object = Fraction(0)
    exceptional_rational: frozenset[Fraction] | None = None
    exceptional_residual: UniPoly | None = None
    polynomial: MultiPoly | None = field(default=None, repr=False)

    @property
    def has_contact(self) -> bool:
        return self.verdict == CONTACT

    def witness_text(self) -> str:
        if self.witness is None:
            return "-"
        return format_one_form(self.witness)

    def to_json(self) -> dict:
        top = self.top_coefficient
        out = {
            "verdict": self.verdict,
            "witness": None if self.witness is None else [format_rational(c) for c in self.witness],
            "top_coefficient": top.to_json() if isinstance(top, UniPoly) else format_rational(top),
        }
        if self.exceptional_rational is not None:
            out["exceptional_lambda"] = {
                "rational": [format_rational(r) for r in sorted(self.exceptional_rational)],
                "residual": self.exceptional_residual.to_json(),
            }
        return out


def format_one_form(coeffs: Sequence[Fraction]) -> str:
    parts = []
    for i in range(len(coeffs), 0, -1):
        c = coeffs[i - 1]
        if not c:
            continue
        body = f"x{i}" if abs(c) == 1 else f"{format_rational(abs(c))}x{i}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return text + "".join(f"{s}{b}" for s, b in parts[1:])


def _unit(n: int, *indices_and_signs: tuple[int, int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * n
    for i, s in indices_and_signs:
        v[i - 1] = Fraction(s)
    return tuple(v)


def candidate_forms(n: int):
    """Witness candidates in search order.

    Single generators ``x_n .. x_1`` first, then ``±x_j ± x_i`` for j > i
    (largest indices first), then the grid ``{0..(n+1)/2}^n``. The grid alone
    is complete: ``P`` has degree at most ``(n+1)/2`` in each variable.
    """
    seen = set()
    for k in range(n, 0, -1):
        seen.add(_unit(n, (k, 1)))
        yield _unit(n, (k, 1))
    for j in range(n, 0, -1):
        for i in range(j - 1, 0, -1):
            for sj, si in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                seen.add(_unit(n, (j, sj), (i, si)))
                yield _unit(n, (j, sj), (i, si))
    for point in product(range((n + 1) // 2 + 1), repeat=n):
        cand = tuple(Fraction(x) for x in point)
        if any(point) and cand not in seen:
            yield cand


def _search_witness(g: LieAlgebra, poly: MultiPoly):
    for cand in candidate_forms(g.dim):
        if poly.evaluate_vars(cand):
            value = contact_value(g, cand)
            if not value:
                raise AssertionError(f"generic polynomial and direct evaluation disagree at {cand}")
            return cand, value
    raise AssertionError("nonzero polynomial without a grid witness")


def find_contact_form(g: LieAlgebra) -> ContactReport:
    """Decide contact existence for an algebra over Q and exhibit a witness."""
    if g.parametric:
        raise ParametricError("use family_analysis for parametric algebras")
    poly = generic_contact_polynomial(g)
    if not poly:
        return ContactReport(NO_CONTACT, polynomial=poly)
    witness, value = _search_witness(g, poly)
    if isinstance(value, UniPoly):
        value = value.constant_value()
    return ContactReport(CONTACT, witness, value, polynomial=poly)


def family_analysis(g: LieAlgebra) -> ContactReport:
    """Contact existence across a one-parameter family.

    ``λ0`` is exceptional when ``P`` vanishes identically at ``λ0``, i.e. when
    the specialized algebra has no contact form at all. These are the roots of
    the gcd of the λ-coefficients of ``P``; rational ones are listed, the rest
    stay in the residual polynomial.
    """
    if not g.parametric:
        raise ParametricError("family_analysis needs a parametric algebra")
    poly = generic_contact_polynomial(g)
    if not poly:
        return ContactReport(NO_CONTACT, polynomial=poly)
    content = UniPoly()
    for c in poly.coefficients():
        content = unipoly_gcd(content, c)
    roots, residual = rational_roots(content)
    verdict = DEPENDS if roots or residual.degree > 0 else CONTACT
    witness, value = _search_witness(g, poly)
    return ContactReport(
        verdict,
        witness,
        value,
        exceptional_rational=roots,
        exceptional_residual=residual,
        polynomial=poly,
    )


def is_exceptional(g: LieAlgebra, lam) -> bool:
    """Whether the specialization at ``lam`` admits no contact form."""
    return not generic_contact_polynomial(specialize(g, lam))


# --- family invariants -------------------------------------------------------


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyInvariant:
    """Rational function ``I(λ) = numerator / denominator`` with inadmissible points."""

    numerator: UniPoly
    denominator: UniPoly
    excluded: frozenset[Fraction] = frozenset()
    source: str = ""

    def __post_init__(self):
        if not self.denominator:
            raise ValueError("invariant denominator is identically zero")
        roots, _ = rational_roots(self.denominator)
        object.__setattr__(self, "excluded", frozenset(self.excluded) | roots)


def invariant_value(inv: FamilyInvariant, lam) -> Fraction:
    lam = as_rational(lam)
    den = inv.denominator.evaluate(lam)
    if not den:
        raise DomainError(f"invariant undefined at lambda = {lam}")
    return inv.numerator.evaluate(lam) / den
