"""The shipped classification data and the harness that re-derives it.

Bracket tables live in ``data/*.nla``. What each entry is expected to satisfy
(central series, witness form, printed top coefficients) is kept in the
tables below, next to the code that checks it.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from ..contact import (
    CONTACT,
    NO_CONTACT,
    ContactReport,
    FamilyInvariant,
    contact_value,
    family_analysis,
    find_contact_form,
)
from ..liealg import LieAlgebra, jacobi_defect, specialize, upper_central_series
from ..scalars import UniPoly, format_rational
from .dsl import AlgebraDefinition, ParseError, parse, parse_constraint, render, render_entry

__all__ = [
    "CatalogEntry",
    "EntryResult",
    "ParseError",
    "VerificationResult",
    "catalog_dir",
    "embedded_catalog",
    "entries_from_definitions",
    "load_file",
    "parse",
    "parse_entries",
    "render",
    "render_entry",
    "verify",
]

CATALOG_FILES = ("dim7.nla", "dim5.nla", "dim3.nla")
LAMBDA_POOL = (Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 2), Fraction(4), Fraction(-1))
SAMPLES_PER_FAMILY = 3

_LAM = UniPoly.lam()

# Witnesses other than the default x_n.
EXPECTED_WITNESS = {"12457L": (6, 7)}

# Top coefficients printed for the two worked examples.
EXPECTED_TOP = {"1357C": Fraction(6), "147E": UniPoly((0, 6, -6))}

# Series for entries whose label does not spell it out.
EXPECTED_DIMS = {
    "heis3": (1, 3),
    "abelian3": (3,),
    "L5,1": (1, 5),
    "L5,3": (1, 3, 5),
    "L5,6": (1, 2, 3, 5),
}

NO_CONTACT_EXPECTED = {"abelian3"}

# Dimension-7 algebras listed as having structure constants rational in the given basis.
RATIONAL_BASIS_KNOWN = frozenset(
    "17 157 147A 147A1 147B 147D 1457B 137B 137B1 137D "
    "1357A 1357C 1357D 1357F 1357F1 1357H 1357J 1357L 1357P 1357P1 1357R "
    "13457C 13457E 13457G 13457I "
    "12457D 12457E 12457G 12457I 12457J 12457J1 12457L "
    "12357C 123457C 123457F".split()
) | {"heis3", "abelian3", "L5,1", "L5,3", "L5,6"}


def dims_from_label(label: str, dim: int) -> tuple[int, ...] | None:
    """``"1357C"`` -> ``(1, 3, 5, 7)`` when the digits form a valid series for ``dim``."""
    m = re.match(r"\d+", label)
    if not m:
        return None
    digits = tuple(int(c) for c in m.group())
    if digits[-1] != dim or any(a >= b for a, b in zip(digits, digits[1:])):
        return None
    return digits


@dataclass
class CatalogEntry:
    id: str
    algebra: LieAlgebra
    expected_upper_dims: tuple[int, ...] | None = None
    expected_witness: tuple[Fraction, ...] | None = None
    expected_top_coefficient: object = None
    expected_contact: bool = True
    family_invariant: FamilyInvariant | None = None
    excluded: frozenset[Fraction] = frozenset()
    constraint: str = ""
    rational_basis_known: bool = False

    @property
    def parametric(self) -> bool:
        return self.algebra.parametric

    @property
    def lambda_constraints(self) -> str:
        parts = [f"{self.algebra.param} != {format_rational(r)}" for r in sorted(self.excluded)]
        if self.constraint:
            parts.append(self.constraint)
        return ", ".join(parts)

    def has_declared_constraints(self) -> bool:
        return bool(self.excluded or self.constraint)

    def admissible(self, lam) -> bool:
        lam = Fraction(lam)
        if lam in self.excluded:
            return False
        for op, bound in parse_constraint(self.constraint, self.algebra.param or ""):
            ok = {
                ">": lam > bound,
                ">=": lam >= bound,
                "<": lam < bound,
                "<=": lam <= bound,
                "!=": lam != bound,
            }[op]
            if not ok:
                return False
        return True

    def sample_lambdas(self, k: int = SAMPLES_PER_FAMILY) -> tuple[Fraction, ...]:
        return tuple(lam for lam in LAMBDA_POOL if self.admissible(lam))[:k]

    def definition(self) -> AlgebraDefinition:
        return AlgebraDefinition(self.id, self.algebra, self.excluded, self.family_invariant, self.constraint)


def _unit(n: int, indices: Iterable[int]) -> tuple[Fraction, ...]:
    idx = set(indices)
    return tuple(Fraction(int(i in idx)) for i in range(1, n + 1))


def entries_from_definitions(defs: Sequence[AlgebraDefinition]) -> list[CatalogEntry]:
    """Attach expectations to parsed definitions."""
    out = []
    for d in defs:
        n = d.algebra.dim
        contact = d.id not in NO_CONTACT_EXPECTED
        witness = None
        if contact and n % 2 == 1:
            witness = _unit(n, EXPECTED_WITNESS.get(d.id, (n,)))
        out.append(
            CatalogEntry(
                id=d.id,
                algebra=d.algebra,
                expected_upper_dims=EXPECTED_DIMS.get(d.id) or dims_from_label(d.id, n),
                expected_witness=witness,
                expected_top_coefficient=EXPECTED_TOP.get(d.id),
                expected_contact=contact,
                family_invariant=d.invariant,
                excluded=d.excluded,
                constraint=d.constraint,
                rational_basis_known=d.id in RATIONAL_BASIS_KNOWN,
            )
        )
    return out


def parse_entries(source: str) -> list[CatalogEntry]:
    return entries_from_definitions(parse(source))


def catalog_dir() -> Path:
    env = os.environ.get("NILCONTACT_CATALOG_DIR")
    return Path(env) if env else Path(__file__).with_name("data")


def load_file(path: str | os.PathLike) -> list[CatalogEntry]:
    return parse_entries(Path(path).read_text(encoding="utf-8"))


def embedded_catalog(directory: str | os.PathLike | None = None) -> list[CatalogEntry]:
    """All shipped entries: 44 in dimension 7, 3 in dimension 5, 2 in dimension 3."""
    base = Path(directory) if directory is not None else catalog_dir()
    entries: list[CatalogEntry] = []
    for name in CATALOG_FILES:
        entries.extend(load_file(base / name))
    return entries


# --- verification -------------------------------------------------------------


@dataclass
class EntryResult:
    id: str
    jacobi_ok: bool
    defects: dict = field(default_factory=dict)
    expected_dims: tuple[int, ...] | None = None
    computed_dims: dict = field(default_factory=dict)  # λ sample (or None) -> dims
    report: ContactReport | None = None
    sample_verdicts: dict = field(default_factory=dict)  # λ sample -> verdict
    expected_witness_value: object = None
    default_witness_value: object = None  # value of η = x_n
    exceptional_admissible: tuple[Fraction, ...] = ()
    notes: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        def val(v):
            if v is None:
                return None
            return v.to_json() if isinstance(v, UniPoly) else format_rational(v)

        return {
            "id": self.id,
            "jacobi": self.jacobi_ok,
            "upper_dims": {("generic" if k is None else format_rational(k)): list(v) for k, v in self.computed_dims.items()},
            "expected_upper_dims": None if self.expected_dims is None else list(self.expected_dims),
            "contact": None if self.report is None else self.report.to_json(),
            "sample_verdicts": {format_rational(k): v for k, v in self.sample_verdicts.items()},
            "expected_witness_value": val(self.expected_witness_value),
            "default_witness_value": val(self.default_witness_value),
            "notes": list(self.notes),
            "failures": list(self.failures),
            "passed": self.passed,
        }


@dataclass
class VerificationResult:
    entries: list[EntryResult] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def passed(self) -> int:
        return sum(e.passed for e in self.entries)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def __getitem__(self, entry_id: str) -> EntryResult:
        for e in self.entries:
            if e.id == entry_id:
                return e
        raise KeyError(entry_id)

    def summary(self) -> str:
        return f"{self.passed}/{self.total} entries pass"

    def to_json(self) -> dict:
        return {
            "entries": [e.to_json() for e in self.entries],
            "summary": {"failed": self.failed, "passed": self.passed, "total": self.total},
        }


def _check_dims(entry: CatalogEntry, g: LieAlgebra, res: EntryResult, key) -> None:
    dims = upper_central_series(g).upper_dims
    res.computed_dims[key] = dims
    if entry.expected_upper_dims is not None and dims != entry.expected_upper_dims:
        where = "" if key is None else f" at lambda={format_rational(key)}"
        res.failures.append(f"upper central series {dims} != expected {entry.expected_upper_dims}{where}")


def verify_entry(entry: CatalogEntry) -> EntryResult:
    g = entry.algebra
    res = EntryResult(entry.id, jacobi_ok=True, expected_dims=entry.expected_upper_dims)
    defects = jacobi_defect(g)
    if defects:
        res.jacobi_ok = False
        res.defects = defects
        res.failures.append("Jacobi identity fails at " + ", ".join(map(str, sorted(defects))))
        return res
    n = g.dim
    odd = n % 2 == 1
    top_index = _unit(n, (n,))

    if not g.parametric:
        _check_dims(entry, g, res, None)
        if not odd:
            res.notes.append("even dimension: no contact analysis")
            return res
        rep = find_contact_form(g)
        res.report = rep
        res.default_witness_value = contact_value(g, top_index)
        if entry.expected_contact and rep.verdict != CONTACT:
            res.failures.append("expected a contact structure, generic contact polynomial is zero")
        if not entry.expected_contact and rep.verdict != NO_CONTACT:
            res.failures.append(f"expected no contact structure, found witness {rep.witness_text()}")
        if entry.expected_witness is not None:
            v = contact_value(g, entry.expected_witness)
            res.expected_witness_value = v
            if not v:
                res.failures.append("expected witness gives eta ^ (d eta)^m = 0")
            elif entry.expected_top_coefficient is not None and v != entry.expected_top_coefficient:
                res.failures.append(f"top coefficient {v} != expected {entry.expected_top_coefficient}")
        return res

    samples = entry.sample_lambdas()
    if len(samples) < SAMPLES_PER_FAMILY:
        res.failures.append(f"only {len(samples)} admissible sample values of lambda")
    for lam in samples:
        _check_dims(entry, specialize(g, lam), res, lam)
    if not odd:
        return res
    rep = family_analysis(g)
    res.report = rep
    res.default_witness_value = contact_value(g, top_index)
    if rep.verdict == NO_CONTACT:
        res.failures.append("generic contact polynomial is zero for every lambda")
    for lam in samples:
        verdict = find_contact_form(specialize(g, lam)).verdict
        res.sample_verdicts[lam] = verdict
        if verdict != CONTACT:
            res.failures.append(f"no contact structure at lambda={format_rational(lam)}")
    if rep.exceptional_rational:
        bad = tuple(sorted(r for r in rep.exceptional_rational if entry.admissible(r)))
        res.exceptional_admissible = bad
        shown = ", ".join(format_rational(r) for r in bad)
        if bad and entry.has_declared_constraints():
            res.failures.append(f"no contact structure at admissible lambda = {shown}")
        elif bad:
            res.notes.append(f"no contact structure at lambda = {shown} (no restriction declared)")
    if rep.exceptional_residual is not None and rep.exceptional_residual.degree > 0:
        res.notes.append(f"irrational exceptional lambda: roots of {rep.exceptional_residual}")
    if entry.expected_witness is not None:
        v = contact_value(g, entry.expected_witness)
        res.expected_witness_value = v
        if not v:
            res.failures.append("expected witness gives eta ^ (d eta)^m = 0 identically")
        for lam in samples:
            if not v.evaluate(lam):
                res.failures.append(f"expected witness fails at lambda={format_rational(lam)}")
        if entry.expected_top_coefficient is not None and v != entry.expected_top_coefficient:
            res.failures.append(f"top coefficient {v} != expected {entry.expected_top_coefficient}")
    return res


def verify(entries: Sequence[CatalogEntry]) -> VerificationResult:
    """Re-derive every entry; failures are recorded, never raised."""
    return VerificationResult([verify_entry(e) for e in entries])
