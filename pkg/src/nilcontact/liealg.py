"""Lie algebras given by structure constants, and their Chevalley-Eilenberg complex.

Basis vectors ``X1..Xn`` and dual forms ``x1..xn`` are indexed from 1.
Structure constants are ``Fraction`` for an ordinary algebra and
:class:`~nilcontact.scalars.UniPoly` for a one-parameter family.

The differential on generators is ``dx_k = sum_{i<j} c_ij^k x_i x_j`` (no
leading minus sign). With this sign the 6 x1...x7 and 6λ(1-λ) x1...x7 values
of the worked examples come out verbatim; flipping the sign only rescales
``η ∧ (dη)^m`` by ``(-1)^m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exterior import ExteriorElement, blade_indices
from .scalars import UniPoly, as_rational, format_rational

MAX_DIMENSION = 16


class JacobiError(ValueError):
    """Raised when a bracket table does not satisfy the Jacobi identity."""

    def __init__(self, defects: dict):
        self.defects = defects
        triples = ", ".join(str(t) for t in sorted(defects))
        super().__init__(f"Jacobi identity fails at {triples}")


class ParametricError(ValueError):
    pass


def _coerce_scalar(c, parametric: bool):
    if isinstance(c, UniPoly):
        if not parametric:
            if not c.is_constant():
                raise ParametricError("λ-dependent constant in a non-parametric algebra")
            return c.constant_value()
        return c
    c = as_rational(c)
    return UniPoly.constant(c) if parametric else c


def _zero(parametric: bool):
    return UniPoly() if parametric else Fraction(0)


class LieAlgebra:
    """Bracket table ``[X_i, X_j] = sum_k c_ij^k X_k`` stored for ``i < j`` only.

    ``param`` names the family parameter (e.g. ``"lambda"``) or is ``None``.
    A parametric algebra keeps every constant as a ``UniPoly``, whether or not
    λ actually occurs in it.
    """

    __slots__ = ("dim", "param", "brackets", "_differential")

    def __init__(self, dim: int, brackets: Mapping | None = None, param: str | None = None):
        if not 0 <= dim <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in 0..{MAX_DIMENSION}, got {dim}")
        self.dim = dim
        self.param = param
        parametric = param is not None
        table: dict[tuple[int, int], tuple] = {}
        for (i, j), value in (brackets or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise IndexError(f"bracket [{i},{j}] out of range 1..{dim}")
            if i >= j:
                raise ValueError(f"bracket heads need i < j, got [{i},{j}]")
            if isinstance(value, Mapping):
                vec = [_zero(parametric)] * dim
                for k, c in value.items():
                    if not 1 <= k <= dim:
                        raise IndexError(f"component X{k} out of range 1..{dim}")
                    vec[k - 1] = _coerce_scalar(c, parametric)
            else:
                if len(value) != dim:
                    raise ValueError(f"bracket [{i},{j}] needs {dim} components")
                vec = [_coerce_scalar(c, parametric) for c in value]
            if any(vec):
                table[(i, j)] = tuple(vec)
        self.brackets = table
        self._differential = None

    @property
    def parametric(self) -> bool:
        return self.param is not None

    def zero_scalar(self):
        return _zero(self.parametric)

    def zero_vector(self) -> tuple:
        return (self.zero_scalar(),) * self.dim

    def bracket(self, i: int, j: int) -> tuple:
        """Components of ``[X_i, X_j]`` for any ordered pair."""
        if i == j:
            return self.zero_vector()
        if i < j:
            return self.brackets.get((i, j), self.zero_vector())
        v = self.brackets.get((j, i))
        return self.zero_vector() if v is None else tuple(-c for c in v)

    def bracket_vectors(self, u: Sequence, v: Sequence) -> list:
        """Bilinear bracket of two coordinate vectors."""
        out = list(self.zero_vector())
        for (i, j), vec in self.brackets.items():
            coeff = u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1]
            if coeff:
                for k, c in enumerate(vec):
                    if c:
                        out[k] = out[k] + coeff * c
        return out

    def structure_constant(self, i: int, j: int, k: int):
        return self.bracket(i, j)[k - 1]

    def is_abelian(self) -> bool:
        return not self.brackets

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim, self.param, self.brackets) == (other.dim, other.param, other.brackets)

    def __hash__(self) -> int:
        return hash((self.dim, self.param, frozenset(self.brackets.items())))

    def format_brackets(self) -> list[str]:
        """Lines like ``[X1,X2]=X4``, one per nonzero bracket."""
        lines = []
        for (i, j), vec in sorted(self.brackets.items()):
            terms = []
            for k, c in enumerate(vec, start=1):
                if not c:
                    continue
                if isinstance(c, UniPoly) and c.is_constant():
                    c = c.constant_value()
                if isinstance(c, Fraction):
                    sign = "-" if c < 0 else "+"
                    mag = abs(c)
                    body = f"X{k}" if mag == 1 else f"{format_rational(mag)}X{k}"
                else:
                    sign, body = "+", f"({c.format(self.param)})X{k}"
                terms.append((sign, body))
            rhs = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            rhs += "".join(f"{s}{b}" for s, b in terms[1:])
            lines.append(f"[X{i},X{j}]={rhs}")
        return lines

    def __repr__(self) -> str:
        head = f"LieAlgebra(dim={self.dim}"
        if self.param:
            head += f", param={self.param!r}"
        return head + ", " + "; ".join(self.format_brackets()) + ")"


@dataclass(frozen=True)
class SeriesReport:
    upper_dims: tuple[int, ...]
    lower_dims: tuple[int, ...]
    nilpotency_index: int | None = field(default=None)

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_index is not None

    def to_json(self) -> dict:
        return {
            "lower_dims": list(self.lower_dims),
            "nilpotency_index": self.nilpotency_index if self.nilpotent else "not nilpotent",
            "upper_dims": list(self.upper_dims),
        }


# --- Jacobi identity and the Chevalley-Eilenberg differential ---------------


def jacobi_defect(g: LieAlgebra) -> dict[tuple[int, int, int], tuple]:
    """Nonzero values of ``[[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj]`` for i<j<k."""
    n = g.dim
    basis = [[g.zero_scalar() + (1 if a == b else 0) for b in range(n)] for a in range(n)]
    defects = {}
    for i, j, k in combinations(range(1, n + 1), 3):
        total = list(g.zero_vector())
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = g.bracket(a, b)
            if not any(inner):
                continue
            outer = g.bracket_vectors(inner, basis[c - 1])
            total = [x + y for x, y in zip(total, outer)]
        if any(total):
            defects[(i, j, k)] = tuple(total)
    return defects


def is_lie_algebra(g: LieAlgebra) -> bool:
    return not jacobi_defect(g)


def ce_differential(g: LieAlgebra, check: bool = True) -> dict[int, ExteriorElement]:
    """``dx_k`` for k = 1..n, as grade-2 elements.

    With ``check=False`` the Jacobi identity is not verified; the resulting
    map is then only an odd derivation, not a differential.
    """
    if check:
        if g._differential is not None:
            return dict(g._differential)
        defects = jacobi_defect(g)
        if defects:
            raise JacobiError(defects)
    n = g.dim
    terms: dict[int, dict[int, object]] = {k: {} for k in range(1, n + 1)}
    for (i, j), vec in g.brackets.items():
        mask = (1 << (i - 1)) | (1 << (j - 1))
        for k, c in enumerate(vec, start=1):
            if c:
                terms[k][mask] = c
    diff = {k: ExteriorElement(n, t) for k, t in terms.items()}
    if check:
        g._differential = diff
    return dict(diff)


def d(g: LieAlgebra, u: ExteriorElement, check: bool = True) -> ExteriorElement:
    """Apply the Chevalley-Eilenberg differential as a degree +1 derivation."""
    if u.dim != g.dim:
        raise ValueError(f"dimension mismatch: form on {u.dim}, algebra of dim {g.dim}")
    dx = ce_differential(g, check=check)
    n = g.dim
    out = ExteriorElement.zero(n)
    for mask, coeff in u.terms.items():
        idx = blade_indices(mask)
        for t, s in enumerate(idx):
            if not dx[s]:
                continue
            left = ExteriorElement.blade(n, idx[:t])
            right = ExteriorElement.blade(n, idx[t + 1:])
            piece = left.wedge(dx[s]).wedge(right)
            if t % 2:
                piece = -piece
            out = out + piece.scale(coeff)
    return out


# --- exact linear algebra over Q --------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    red, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _reduce(v: Sequence[Fraction], red: list[list[Fraction]], pivots: list[int]) -> list[Fraction]:
    v = list(v)
    for row, p in zip(red, pivots):
        if v[p]:
            f = v[p]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def _require_rational(g: LieAlgebra) -> None:
    if g.parametric:
        raise ParametricError("specialize λ first")


def upper_central_series(g: LieAlgebra) -> SeriesReport:
    """Dimensions of ``C_1 ⊂ C_2 ⊂ ...`` and of the lower central series."""
    _require_rational(g)
    n = g.dim
    brackets = {(m, j): g.bracket(m, j) for m in range(1, n + 1) for j in range(1, n + 1)}
    red: list[list[Fraction]] = []
    pivots: list[int] = []
    dims: list[int] = []
    current = 0
    while current < n:
        # x is in C_{i+1} iff [x, X_j] vanishes modulo C_i for every j
        rows = []
        for j in range(1, n + 1):
            cols = [_reduce(brackets[(m, j)], red, pivots) for m in range(1, n + 1)]
            for coord in range(n):
                row = [cols[m][coord] for m in range(n)]
                if any(row):
                    rows.append(row)
        kernel = _nullspace(rows, n) if rows else [
            [Fraction(int(a == b)) for b in range(n)] for a in range(n)
        ]
        if len(kernel) == current:
            break
        current = len(kernel)
        dims.append(current)
        red, pivots = _rref(kernel, n)
    index = len(dims) if current == n else None
    if not dims:
        dims = [0]
        index = 0 if n == 0 else None
    return SeriesReport(tuple(dims), lower_central_series(g), index)


def lower_central_series(g: LieAlgebra) -> tuple[int, ...]:
    """Dimensions of ``g = g^1 ⊃ [g,g] ⊃ [g,[g,g]] ⊃ ...`` until stable."""
    _require_rational(g)
    n = g.dim
    basis = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
    dims = [n]
    span = basis
    while span:
        rows = [g.bracket_vectors(e, v) for e in basis for v in span]
        red, _ = _rref([r for r in rows if any(r)], n) if rows else ([], [])
        if len(red) == dims[-1]:
            break
        dims.append(len(red))
        span = red
    return tuple(dims)


# --- constructors and transformations ----------------------------------------


def specialize(g: LieAlgebra, lam) -> LieAlgebra:
    """Substitute ``lam`` for the family parameter."""
    if not g.parametric:
        raise ParametricError("algebra has no parameter to specialize")
    lam = as_rational(lam)
    table = {key: tuple(c.evaluate(lam) for c in vec) for key, vec in g.brackets.items()}
    return LieAlgebra(g.dim, table)


def direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    """``g ⊕ h`` with h's basis shifted to ``n_g+1 .. n_g+n_h``."""
    if g.parametric and h.parametric and g.param != h.param:
        raise ParametricError("direct sum of families with different parameters")
    param = g.param or h.param
    n = g.dim + h.dim
    table = {}
    for (i, j), vec in g.brackets.items():
        table[(i, j)] = {k: c for k, c in enumerate(vec, start=1) if c}
    for (i, j), vec in h.brackets.items():
        table[(i + g.dim, j + g.dim)] = {k + g.dim: c for k, c in enumerate(vec, start=1) if c}
    return LieAlgebra(n, table, param=param)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n)


def relabel(g: LieAlgebra, perm: Sequence[int]) -> LieAlgebra:
    """Rename ``X_i`` to ``X_{perm[i-1]}``; ``perm`` is a permutation of 1..n."""
    n = g.dim
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n")
    table: dict[tuple[int, int], dict[int, object]] = {}
    for (i, j), vec in g.brackets.items():
        a, b = perm[i - 1], perm[j - 1]
        sign = 1
        if a > b:
            a, b, sign = b, a, -1
        table[(a, b)] = {perm[k - 1]: c * sign for k, c in enumerate(vec, start=1) if c}
    return LieAlgebra(n, table, param=g.param)


# --- combinatorial criteria --------------------------------------------------


@dataclass(frozen=True)
class CoverWitness:
    pairs: tuple[tuple[int, int], ...]
    singleton: int


def _perfect_matching(remaining: tuple[int, ...], edges: set[tuple[int, int]]):
    if not remaining:
        return ()
    first, rest = remaining[0], remaining[1:]
    for partner in rest:
        if (first, partner) in edges:
            sub = _perfect_matching(tuple(x for x in rest if x != partner), edges)
            if sub is not None:
                return ((first, partner),) + sub
    return None


def cover_criterion(g: LieAlgebra) -> CoverWitness | None:
    """Look for nonzero brackets on disjoint pairs covering all indices but one.

    Returns the pairs and the left-out index, or ``None``. ``None`` forces the
    generic contact polynomial to vanish: ``(dω)^m`` can only reach the blade
    ``x1...xn`` minus one index through such a cover.
    """
    n = g.dim
    if n % 2 == 0:
        raise ValueError(f"cover criterion needs odd dimension, got {n}")
    edges = set(g.brackets)
    for m in range(n, 0, -1):
        rest = tuple(i for i in range(1, n + 1) if i != m)
        match = _perfect_matching(rest, edges)
        if match is not None:
            return CoverWitness(tuple(sorted(match)), m)
    return None


def basis_aligned_decomposable(g: LieAlgebra) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Split of the basis into two bracket-closed blocks with zero cross brackets.

    Only decompositions compatible with the given basis are found. Returns the
    lexicographically least block containing index 1, with its complement.
    """
    n = g.dim
    if n > MAX_DIMENSION:
        raise ValueError(f"dimension above {MAX_DIMENSION}")
    if n < 2:
        return None
    support = {key: {k for k, c in enumerate(vec, start=1) if c} for key, vec in g.brackets.items()}
    best = None
    full = (1 << n) - 1
    for mask in range(1 << (n - 1)):
        block = (mask << 1) | 1  # index 1 always in the first block
        if block == full:
            continue
        ok = True
        for (i, j), comps in support.items():
            si = (block >> (i - 1)) & 1
            sj = (block >> (j - 1)) & 1
            if si != sj or any(((block >> (k - 1)) & 1) != si for k in comps):
                ok = False
                break
        if ok:
            cand = blade_indices(block)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return best, tuple(i for i in range(1, n + 1) if i not in best)


def rational_in_given_basis(g: LieAlgebra, lam=None) -> bool:
    """Whether all structure constants are rational in the given basis.

    A family without a chosen ``lam`` counts as unresolved and gives False.
    """
    if g.parametric:
        if lam is None:
            return False
        g = specialize(g, lam)
    return all(isinstance(c, Fraction) for vec in g.brackets.values() for c in vec)
