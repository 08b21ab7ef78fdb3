"""Exact coefficient rings.

Three rings are used throughout the package:

* ``Fraction`` (from the standard library) for rational numbers,
* :class:`UniPoly` for polynomials in the family parameter ``lambda``,
* :class:`MultiPoly` for polynomials in generic form coefficients
  ``a1..an`` whose coefficients are :class:`UniPoly`.

Values are immutable and kept in canonical form, so ``==`` is structural and
``bool(x)`` is the zero test for every ring.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

MAX_VARIABLES = 16


def as_rational(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


class UniPoly:
    """Univariate polynomial over Q; ``coeffs[i]`` is the coefficient of λ^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Number) -> "UniPoly":
        return cls((c,))

    @classmethod
    def lam(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def coerce(cls, other) -> "UniPoly | None":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls((other,))
        return None

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        o = UniPoly.coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self.coeffs)

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __add__(self, other):
        o = UniPoly.coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other):
        o = UniPoly.coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = UniPoly.coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = UniPoly.coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = UniPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x: Number) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x: Number) -> Fraction:
        # Horner
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UniPoly(c / lead for c in self.coeffs)

    def divmod(self, divisor: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = divisor.degree
        lead = divisor.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for shift in range(len(rem) - dq - 1, -1, -1):
            c = rem[shift + dq] / lead
            quot[shift] = c
            if c:
                for i, dc in enumerate(divisor.coeffs):
                    rem[shift + i] -= c * dc
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def primitive_integer_form(self) -> tuple[int, ...]:
        """Integer coefficients with content 1 and the same roots."""
        if not self.coeffs:
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return tuple(i // g for i in ints)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "UniPoly":
        return cls(Fraction(s) for s in data)

    def format(self, var: str = "lambda") -> str:
        """Render in a form accepted back by the catalog parser."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if power == 0:
                body = format_rational(mag)
            else:
                mono = var if power == 1 else f"{var}^{power}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"UniPoly({self.format()!r})"

    __str__ = format


def unipoly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd; ``gcd(0, 0) == 0``."""
    p, q = UniPoly.coerce(p), UniPoly.coerce(q)
    while q:
        p, q = q, p % q
    return p.monic()


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_root_candidates(p: UniPoly) -> set[Fraction]:
    """All ``±r/s`` allowed by the rational root theorem (plus 0 if p(0) = 0)."""
    ints = list(p.primitive_integer_form())
    cands: set[Fraction] = set()
    if ints and ints[0] == 0:
        cands.add(Fraction(0))
    while ints and ints[0] == 0:
        ints.pop(0)
    if len(ints) <= 1:
        return cands
    for r in _divisors(ints[0]):
        for s in _divisors(ints[-1]):
            cands.add(Fraction(r, s))
            cands.add(Fraction(-r, s))
    return cands


def rational_roots(p: UniPoly) -> tuple[frozenset[Fraction], UniPoly]:
    """Rational roots of ``p`` and the monic residual with the linear factors removed.

    Roots are returned as a set; the residual has every root divided out with
    full multiplicity, so it has no rational root left.
    """
    p = UniPoly.coerce(p)
    if not p:
        raise ValueError("zero polynomial has no root set")
    roots = set()
    residual = p.monic()
    for r in sorted(rational_root_candidates(p)):
        factor = UniPoly((-r, 1))
        while residual.degree >= 1:
            q, rem = residual.divmod(factor)
            if rem:
                break
            roots.add(r)
            residual = q
    return frozenset(roots), residual.monic()


def _check_nvars(n: int) -> None:
    if not 0 <= n <= MAX_VARIABLES:
        raise ValueError(f"supported number of variables is 0..{MAX_VARIABLES}, got {n}")


class MultiPoly:
    """Polynomial in ``a1..an`` with :class:`UniPoly` coefficients.

    Exponent vectors are dense tuples of length ``nvars``; terms with a zero
    coefficient are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        _check_nvars(nvars)
        self.nvars = nvars
        clean: dict[tuple[int, ...], UniPoly] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = UniPoly.coerce(c)
            if c is None:
                raise TypeError(f"unsupported coefficient {c!r}")
            if c:
                clean[exps] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def variable(cls, i: int, nvars: int) -> "MultiPoly":
        """The variable ``a_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = 1
        return cls(nvars, {tuple(exps): UniPoly.constant(1)})

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        c = UniPoly.coerce(other)
        if c is None:
            return None
        return MultiPoly(self.nvars, {(0,) * self.nvars: c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            c = UniPoly.coerce(other)
            if c is None:
                return NotImplemented
            return self.terms == ({(0,) * self.nvars: c} if c else {})
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, ...], UniPoly] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(1, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> UniPoly:
        return self.terms.get(tuple(exps), UniPoly())

    def coefficients(self) -> list[UniPoly]:
        return [self.terms[e] for e in sorted(self.terms)]

    def evaluate_vars(self, a: Sequence[Number]) -> UniPoly:
        """Substitute ``a`` for the variables, leaving a polynomial in λ."""
        if len(a) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(a)}")
        a = [as_rational(x) for x in a]
        acc = UniPoly()
        for exps, c in self.terms.items():
            m = Fraction(1)
            for x, k in zip(a, exps):
                if k:
                    m *= x ** k
            if m:
                acc = acc + c * m
        return acc

    def specialize(self, lam: Number) -> "MultiPoly":
        """Substitute ``lam`` for λ in every coefficient."""
        return MultiPoly(self.nvars, {e: UniPoly.constant(c.evaluate(lam)) for e, c in self.terms.items()})

    def to_json(self) -> list[dict]:
        return [{"coefficient": self.terms[e].to_json(), "exponents": list(e)} for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, nvars: int, data: Sequence[Mapping]) -> "MultiPoly":
        return cls(nvars, {tuple(t["exponents"]): UniPoly.from_json(t["coefficient"]) for t in data})

    def format(self, var: str = "lambda") -> str:
        """Expanded monomial form, e.g. ``a3^2`` or ``(6*lambda - 6*lambda^2)*a7^4``."""
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"a{i + 1}" if k == 1 else f"a{i + 1}^{k}" for i, k in enumerate(exps) if k
            )
            if c.is_constant():
                v = c.constant_value()
                sign = "-" if v < 0 else "+"
                mag = abs(v)
                if not mono:
                    body = format_rational(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{format_rational(mag)}*{mono}"
            else:
                sign = "+"
                body = f"({c.format(var)})" + (f"*{mono}" if mono else "")
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.format()!r})"

    __str__ = format


def evaluate(p, lam: Number | None = None, a: Sequence[Number] | None = None) -> Fraction:
    """Exact value of a scalar at λ = ``lam`` and variables = ``a``.

    ``lam`` may be omitted when the value does not depend on λ.
    """
    if isinstance(p, MultiPoly):
        if a is None:
            raise ValueError("a MultiPoly needs a value vector")
        p = p.evaluate_vars(a)
    if isinstance(p, UniPoly):
        if lam is None:
            return p.constant_value()
        return p.evaluate(lam)
    return as_rational(p)


def grid(values: Sequence[Number], n: int):
    """Deterministic iteration over ``values^n`` in lexicographic order."""
    return product(values, repeat=n)
