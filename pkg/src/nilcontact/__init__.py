"""Exact contact-structure analysis for nilpotent Lie algebras."""

__version__ = "0.1.0"

from .contact import (
    ContactReport,
    FamilyInvariant,
    contact_value,
    family_analysis,
    find_contact_form,
    generic_contact_polynomial,
    invariant_value,
)
from .exterior import ExteriorElement, grade, power, wedge
from .liealg import (
    JacobiError,
    LieAlgebra,
    ParametricError,
    SeriesReport,
    basis_aligned_decomposable,
    ce_differential,
    cover_criterion,
    d,
    direct_sum,
    jacobi_defect,
    rational_in_given_basis,
    specialize,
    upper_central_series,
)
from .scalars import MultiPoly, UniPoly, evaluate, rational_roots, unipoly_gcd

__all__ = [
    "ContactReport",
    "ExteriorElement",
    "FamilyInvariant",
    "JacobiError",
    "LieAlgebra",
    "MultiPoly",
    "ParametricError",
    "SeriesReport",
    "UniPoly",
    "basis_aligned_decomposable",
    "ce_differential",
    "contact_value",
    "cover_criterion",
    "d",
    "direct_sum",
    "evaluate",
    "family_analysis",
    "find_contact_form",
    "generic_contact_polynomial",
    "grade",
    "invariant_value",
    "jacobi_defect",
    "power",
    "rational_in_given_basis",
    "rational_roots",
    "specialize",
    "unipoly_gcd",
    "upper_central_series",
    "wedge",
]
