"""Reader and writer for ``.nla`` algebra definition files.

Grammar::

    file     := entry*
    entry    := 'algebra' STRING 'dim' INT body
              | 'family' STRING 'dim' INT 'param' IDENT
                    ['exclude' '{' RAT (',' RAT)* '}']
                    ['invariant' STRING] ['constraint' STRING] body
    body     := '{' bracket* '}'
    bracket  := '[' INT ',' INT ']' '=' ['-'] term (('+' | '-') term)* ';'
    term     := [coeff '*'] INT
    coeff    := RAT | IDENT | '(' expr ')'
    RAT      := ['-'] INT ['/' INT]

``expr`` is an arithmetic expression in the parameter (``+ - * / ^`` and
parentheses). Invariant strings use the same expression language and may be
rational functions; constraint strings are comma-separated comparisons such
as ``lambda > 1``. ``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..contact import FamilyInvariant
from ..liealg import LieAlgebra
from ..scalars import UniPoly, format_rational, unipoly_gcd


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str | None):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        shown = "end of input" if token is None else repr(token)
        super().__init__(f"{where}: {message} (at {shown})")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>>=|<=|!=|[{}\[\],=;+\-*/^()<>])
    """,
    re.VERBOSE,
)

KEYWORDS = {"algebra", "family", "dim", "param", "exclude", "invariant", "constraint"}


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError("unexpected character", line, col, source[pos])
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                if kind == "ident" and text in KEYWORDS:
                    kind = "keyword"
                tokens.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# --- rational functions in one variable ---------------------------------------


def _normalize(num: UniPoly, den: UniPoly) -> tuple[UniPoly, UniPoly]:
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    g = unipoly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lead = den.leading
    return num * (1 / lead), den * (1 / lead)


class _Cursor:
    def __init__(self, tokens: list[Token], line_offset: int = 0, col_offset: int = 0):
        self.tokens = tokens
        self.i = 0
        self.line_offset = line_offset
        self.col_offset = col_offset

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        line = tok.line + self.line_offset
        col = tok.column + (self.col_offset if tok.line == 1 else 0)
        raise ParseError(message, line, col, None if tok.kind == "eof" else tok.text)

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            want = repr(text) if text else kind
            self.error(f"expected {want}")
        return t


class _ExprParser:
    """Recursive descent over ``+ - * / ^`` returning (numerator, denominator)."""

    def __init__(self, cur: _Cursor, param: str | None):
        self.cur = cur
        self.param = param

    def expr(self):
        num, den = self.term()
        while True:
            if self.cur.accept("op", "+"):
                n2, d2 = self.term()
                num, den = _normalize(num * d2 + n2 * den, den * d2)
            elif self.cur.accept("op", "-"):
                n2, d2 = self.term()
                num, den = _normalize(num * d2 - n2 * den, den * d2)
            else:
                return num, den

    def term(self):
        num, den = self.unary()
        while True:
            if self.cur.accept("op", "*"):
                n2, d2 = self.unary()
                num, den = _normalize(num * n2, den * d2)
            elif self.cur.at("op", "/"):
                tok = self.cur.accept("op", "/")
                n2, d2 = self.unary()
                if not n2:
                    self.cur.error("division by zero", tok)
                num, den = _normalize(num * d2, den * n2)
            else:
                return num, den

    def unary(self):
        if self.cur.accept("op", "-"):
            num, den = self.unary()
            return -num, den
        return self.power()

    def power(self):
        num, den = self.atom()
        if self.cur.accept("op", "^"):
            neg = False
            paren = self.cur.accept("op", "(")
            if self.cur.accept("op", "-"):
                neg = True
            k = int(self.cur.expect("int").text)
            if paren:
                self.cur.expect("op", ")")
            if neg:
                if not num:
                    self.cur.error("zero to a negative power")
                num, den = den, num
            num, den = _normalize(num ** k, den ** k)
        return num, den

    def atom(self):
        one = UniPoly.constant(1)
        if self.cur.at("int"):
            return UniPoly.constant(int(self.cur.expect("int").text)), one
        if self.cur.at("ident"):
            tok = self.cur.expect("ident")
            if tok.text != self.param:
                self.cur.error(f"unknown identifier (parameter is {self.param!r})", tok)
            return UniPoly.lam(), one
        if self.cur.accept("op", "("):
            value = self.expr()
            self.cur.expect("op", ")")
            return value
        self.cur.error("expected a number, the parameter or '('")


def parse_expression(text: str, param: str, line: int = 1, column: int = 1) -> tuple[UniPoly, UniPoly]:
    """Parse a rational function of ``param``; returns reduced (num, den)."""
    cur = _Cursor(tokenize(text), line - 1, column)
    value = _ExprParser(cur, param).expr()
    if not cur.at("eof"):
        cur.error("unexpected token in expression")
    return value


_COMPARISON = re.compile(r"^\s*([A-Za-z_]\w*)\s*(>=|<=|!=|>|<)\s*(-?\d+(?:/\d+)?)\s*$")


def parse_constraint(text: str, param: str) -> tuple[tuple[str, Fraction], ...]:
    """``"lambda > 1, lambda >= 0"`` -> ``(('>', 1), ('>=', 0))``."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = _COMPARISON.match(part)
        if m is None or m.group(1) != param:
            raise ValueError(f"cannot read constraint {part!r}")
        out.append((m.group(2), Fraction(m.group(3))))
    return tuple(out)


# --- entries ---------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraDefinition:
    """One parsed ``algebra`` or ``family`` block."""

    id: str
    algebra: LieAlgebra
    excluded: frozenset[Fraction] = frozenset()
    invariant: FamilyInvariant | None = None
    constraint: str = ""
    line: int = 0

    @property
    def parametric(self) -> bool:
        return self.algebra.parametric

    def __eq__(self, other):
        if not isinstance(other, AlgebraDefinition):
            return NotImplemented
        return (self.id, self.algebra, self.excluded, self.invariant, self.constraint) == (
            other.id,
            other.algebra,
            other.excluded,
            other.invariant,
            other.constraint,
        )

    def __hash__(self):
        return hash((self.id, self.algebra))


class _FileParser:
    def __init__(self, source: str):
        self.cur = _Cursor(tokenize(source))

    def parse(self) -> list[AlgebraDefinition]:
        out = []
        seen = {}
        while not self.cur.at("eof"):
            start = self.cur.tok
            entry = self.entry()
            if entry.id in seen:
                self.cur.error(f"duplicate entry id (first defined on line {seen[entry.id]})", start)
            seen[entry.id] = start.line
            out.append(entry)
        return out

    def _string(self) -> str:
        return self.cur.expect("string").text[1:-1]

    def _int(self) -> int:
        return int(self.cur.expect("int").text)

    def _rational(self) -> Fraction:
        sign = -1 if self.cur.accept("op", "-") else 1
        value = Fraction(self._int())
        if self.cur.accept("op", "/"):
            tok = self.cur.tok
            den = self._int()
            if den == 0:
                self.cur.error("zero denominator", tok)
            value /= den
        return sign * value

    def entry(self) -> AlgebraDefinition:
        head = self.cur.tok
        if self.cur.accept("keyword", "algebra"):
            param = None
        elif self.cur.accept("keyword", "family"):
            param = ""
        else:
            self.cur.error("expected 'algebra' or 'family'")
        name = self._string()
        self.cur.expect("keyword", "dim")
        dim_tok = self.cur.tok
        dim = self._int()
        if not 1 <= dim <= 16:
            self.cur.error("dimension must be between 1 and 16", dim_tok)
        excluded: frozenset[Fraction] = frozenset()
        invariant = None
        constraint = ""
        if param is not None:
            self.cur.expect("keyword", "param")
            param = self.cur.expect("ident").text
            if self.cur.accept("keyword", "exclude"):
                self.cur.expect("op", "{")
                vals = [self._rational()]
                while self.cur.accept("op", ","):
                    vals.append(self._rational())
                self.cur.expect("op", "}")
                excluded = frozenset(vals)
            if self.cur.at("keyword", "invariant"):
                self.cur.expect("keyword", "invariant")
                tok = self.cur.tok
                text = self._string()
                num, den = parse_expression(text, param, tok.line, tok.column)
                invariant = FamilyInvariant(num, den, excluded, text)
            if self.cur.at("keyword", "constraint"):
                self.cur.expect("keyword", "constraint")
                tok = self.cur.tok
                constraint = self._string()
                try:
                    parse_constraint(constraint, param)
                except ValueError as exc:
                    self.cur.error(str(exc), tok)
        brackets = self.body(dim, param)
        algebra = LieAlgebra(dim, brackets, param=param)
        return AlgebraDefinition(name, algebra, excluded, invariant, constraint, head.line)

    def body(self, dim: int, param: str | None) -> dict:
        self.cur.expect("op", "{")
        table: dict[tuple[int, int], dict[int, object]] = {}
        while not self.cur.accept("op", "}"):
            head = self.cur.expect("op", "[")
            i_tok = self.cur.tok
            i = self._int()
            self.cur.expect("op", ",")
            j_tok = self.cur.tok
            j = self._int()
            self.cur.expect("op", "]")
            for v, t in ((i, i_tok), (j, j_tok)):
                if not 1 <= v <= dim:
                    self.cur.error(f"index {v} out of range 1..{dim}", t)
            if i >= j:
                self.cur.error(f"bracket head needs i < j, got [{i},{j}]", i_tok)
            if (i, j) in table:
                self.cur.error(f"duplicate bracket [{i},{j}]", head)
            self.cur.expect("op", "=")
            comps: dict[int, object] = {}
            sign = -1 if self.cur.accept("op", "-") else 1
            while True:
                coeff, k = self.term(dim, param)
                coeff = coeff * sign
                comps[k] = comps.get(k, 0) + coeff
                if self.cur.accept("op", "+"):
                    sign = 1
                elif self.cur.accept("op", "-"):
                    sign = -1
                else:
                    break
            self.cur.expect("op", ";")
            table[(i, j)] = comps
        return table

    def term(self, dim: int, param: str | None):
        coeff: object = Fraction(1)
        cur = self.cur
        if cur.at("int") and not (cur.peek().kind == "op" and cur.peek().text in "/*"):
            pass
        elif cur.at("int"):
            coeff = Fraction(self._int())
            if cur.at("op", "/"):
                cur.expect("op", "/")
                tok = cur.tok
                den = self._int()
                if den == 0:
                    cur.error("zero denominator", tok)
                coeff /= den
            cur.expect("op", "*")
        elif cur.at("ident"):
            tok = cur.expect("ident")
            if param is None or tok.text != param:
                cur.error("unknown identifier in bracket coefficient", tok)
            coeff = UniPoly.lam()
            cur.expect("op", "*")
        elif cur.at("op", "("):
            open_tok = cur.expect("op", "(")
            num, den = _ExprParser(cur, param).expr()
            cur.expect("op", ")")
            if den.degree > 0:
                cur.error("bracket coefficients must be polynomials", open_tok)
            coeff = num * (1 / den.constant_value())
            if coeff.is_constant():
                coeff = coeff.constant_value()
            elif param is None:
                cur.error("parameter used outside a family", open_tok)
            cur.expect("op", "*")
        else:
            cur.error("expected a bracket term")
        k_tok = cur.tok
        k = self._int()
        if not 1 <= k <= dim:
            cur.error(f"index {k} out of range 1..{dim}", k_tok)
        return coeff, k


def parse(source: str) -> list[AlgebraDefinition]:
    """Parse every entry in ``source``; raises :class:`ParseError`."""
    return _FileParser(source).parse()


# --- rendering -------------------------------------------------------------------


def _render_term(c, k: int, param: str | None, first: bool) -> str:
    if isinstance(c, UniPoly) and c.is_constant():
        c = c.constant_value()
    if isinstance(c, Fraction):
        neg = c < 0
        mag = abs(c)
        body = str(k) if mag == 1 else f"{format_rational(mag)}*{k}"
    else:
        neg = False
        body = f"({c.format(param)})*{k}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def render_entry(entry: AlgebraDefinition) -> str:
    g = entry.algebra
    if g.parametric:
        head = f'family "{entry.id}" dim {g.dim} param {g.param}'
        if entry.excluded:
            head += " exclude { " + ", ".join(format_rational(r) for r in sorted(entry.excluded)) + " }"
        if entry.invariant is not None:
            head += f' invariant "{entry.invariant.source}"'
        if entry.constraint:
            head += f' constraint "{entry.constraint}"'
    else:
        head = f'algebra "{entry.id}" dim {g.dim}'
    lines = [head + " {"]
    for (i, j), vec in sorted(g.brackets.items()):
        rhs = ""
        for k, c in enumerate(vec, start=1):
            if c:
                rhs += _render_term(c, k, g.param, not rhs)
        lines.append(f"  [{i},{j}] = {rhs};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(entries) -> str:
    return "\n".join(render_entry(e) for e in entries)
