"""Exterior algebra on the dual basis x1..xn.

A blade ``x_{i1} ... x_{ip}`` (i1 < ... < ip) is stored as the bitmask with
bits ``i1-1, ..., ip-1`` set. Coefficients may come from any ring that has
``+``, ``*``, unary ``-`` and ``bool`` as zero test (``Fraction``,
``UniPoly``, ``MultiPoly``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .scalars import UniPoly


def blade_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 1:
            raise IndexError(f"basis indices start at 1, got {i}")
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"repeated index {i} in blade")
        mask |= bit
    return mask


def blade_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_sign(a: int, b: int) -> int:
    """Sign of ``blade(a) ∧ blade(b)`` after sorting, 0 if they overlap."""
    if a & b:
        return 0
    # inversions: pairs (i in a, j in b) with i > j
    swaps = 0
    m = b
    while m:
        low = m & -m
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        m ^= low
    return -1 if swaps & 1 else 1


class ExteriorElement:
    """Element of the exterior algebra over ``dim`` generators."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[int, object] | None = None):
        self.dim = dim
        full = (1 << dim) - 1
        clean = {}
        for mask, c in (terms or {}).items():
            if mask & ~full:
                raise IndexError(f"blade {blade_indices(mask)} exceeds dimension {dim}")
            if c:
                clean[mask] = c
        self.terms: dict[int, object] = clean

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> "ExteriorElement":
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, dim: int) -> "ExteriorElement":
        return cls._raw(dim, {})

    @classmethod
    def unit(cls, dim: int, coeff=1) -> "ExteriorElement":
        return cls(dim, {0: Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def generator(cls, dim: int, i: int, coeff=1) -> "ExteriorElement":
        """The 1-form ``coeff * x_i``."""
        if not 1 <= i <= dim:
            raise IndexError(f"generator x{i} out of range 1..{dim}")
        return cls(dim, {1 << (i - 1): Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def blade(cls, dim: int, indices: Iterable[int], coeff=1) -> "ExteriorElement":
        """Product ``coeff * x_{i1} ∧ ... ∧ x_{ip}`` for indices in any order."""
        out = cls.unit(dim, coeff)
        for i in indices:
            out = out.wedge(cls.generator(dim, i))
        return out

    @classmethod
    def one_form(cls, coeffs) -> "ExteriorElement":
        """``sum_i coeffs[i-1] * x_i``."""
        dim = len(coeffs)
        return cls(dim, {1 << i: c for i, c in enumerate(coeffs)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExteriorElement):
            return self.dim == other.dim and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    def _same_dim(self, other: "ExteriorElement") -> None:
        if not isinstance(other, ExteriorElement):
            raise TypeError(f"expected an ExteriorElement, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        self._same_dim(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return ExteriorElement._raw(self.dim, out)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement._raw(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def scale(self, c) -> "ExteriorElement":
        """Multiply every coefficient by the scalar ``c`` (on the left)."""
        return ExteriorElement(self.dim, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, c) -> "ExteriorElement":
        if isinstance(c, ExteriorElement):
            return NotImplemented
        return ExteriorElement(self.dim, {m: v * c for m, v in self.terms.items()})

    def __rmul__(self, c) -> "ExteriorElement":
        return self.scale(c)

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        self._same_dim(other)
        out: dict[int, object] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign = blade_sign(ma, mb)
                if not sign:
                    continue
                prod = ca * cb
                if sign < 0:
                    prod = -prod
                m = ma | mb
                s = out.get(m)
                out[m] = prod if s is None else s + prod
        return ExteriorElement._raw(self.dim, {m: c for m, c in out.items() if c})

    __xor__ = wedge

    def power(self, k: int) -> "ExteriorElement":
        if k < 0:
            raise ValueError("negative exterior power")
        result = ExteriorElement.unit(self.dim)
        for _ in range(k):
            if not result:
                break
            result = result.wedge(self)
        return result

    def grade(self, p: int) -> "ExteriorElement":
        """Homogeneous part of degree ``p``."""
        if not 0 <= p <= self.dim:
            raise ValueError(f"grade {p} outside 0..{self.dim}")
        return ExteriorElement._raw(
            self.dim, {m: c for m, c in self.terms.items() if bin(m).count("1") == p}
        )

    def grades(self) -> set[int]:
        return {bin(m).count("1") for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def coefficient(self, indices: Iterable[int]):
        return self.terms.get(blade_mask(indices), Fraction(0))

    def top_coefficient(self):
        """Coefficient of x1 x2 ... xn."""
        return self.terms.get((1 << self.dim) - 1, Fraction(0))

    def items(self):
        """``(indices, coefficient)`` pairs ordered by grade, then indices."""
        keys = sorted(self.terms, key=lambda m: (bin(m).count("1"), blade_indices(m)))
        return [(blade_indices(m), self.terms[m]) for m in keys]

    def format(self, var: str = "lambda") -> str:
        if not self.terms:
            return "0"
        pieces = []
        for idx, c in self.items():
            blade = "".join(f"x{i}" for i in idx) or "1"
            pieces.append(_format_term(c, blade, var))
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self) -> str:
        return f"ExteriorElement({self.dim}, {self.format()!r})"

    __str__ = format


def _format_term(c, blade: str, var: str) -> str:
    if isinstance(c, UniPoly) and c.is_constant():
        c = c.constant_value()
    if isinstance(c, (int, Fraction)):
        if c == 1:
            return blade
        if c == -1:
            return "-" + blade if blade != "1" else "-1"
        return f"{c}{blade}" if blade != "1" else str(c)
    body = c.format(var) if hasattr(c, "format") else str(c)
    return f"({body}){blade}" if blade != "1" else f"({body})"


def wedge(u: ExteriorElement, v: ExteriorElement) -> ExteriorElement:
    return u.wedge(v)


def grade(u: ExteriorElement, p: int) -> ExteriorElement:
    return u.grade(p)


def power(u: ExteriorElement, k: int) -> ExteriorElement:
    return u.power(k)
