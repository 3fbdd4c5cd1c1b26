"""Sparse multivariate integer polynomials and exact determinants.

Every weight and every matching count lives in :class:`Poly`. Monomials are
tuples of ``(variable, exponent)`` pairs sorted by variable name; the zero
polynomial has no terms. Terms are ordered lexicographically with variables
compared by name (``a > b > ... > z``), which fixes both the printed form and
the leading term used by :func:`exact_div`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[str, int], ...]

VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_SENTINEL = "\U0010ffff"


class RingError(ArithmeticError):
    pass


class NotDivisible(RingError):
    pass


class DivisionByZero(RingError, ZeroDivisionError):
    pass


class UnboundVariable(RingError, KeyError):
    pass


class NotSquare(RingError, ValueError):
    pass


class RingParseError(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b if b divides a, else None."""
    if not b:
        return a
    da = dict(a)
    for v, e in b:
        got = da.get(v, 0)
        if got < e:
            return None
        if got == e:
            del da[v]
        else:
            da[v] = got - e
    return tuple(sorted(da.items()))


def _lex_key(m: Monomial) -> tuple[str, ...]:
    # Ascending key order is descending lex order of monomials.
    names: list[str] = []
    for v, e in m:
        names.extend([v] * e)
    names.append(_SENTINEL)
    return tuple(names)


class Poly:
    """Immutable polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._terms: dict[Monomial, int] = (
            {m: c for m, c in terms.items() if c} if terms else {}
        )
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls._raw({(): int(c)} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        if not VAR_RE.match(name):
            raise ValueError(f"bad variable name {name!r}")
        return cls._raw({((name, 1),): 1})

    @classmethod
    def coerce(cls, x: "Poly | int | str") -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a ring element")
        if isinstance(x, int):
            return cls.const(x)
        if isinstance(x, str):
            return parse_poly(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), 0)

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def leading_term(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = min(self._terms, key=_lex_key)
        return m, self._terms[m]

    # arithmetic

    def __add__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if not mb:
                return Poly._raw({m: c * cb for m, c in a.items()})
            return Poly._raw({_mono_mul(m, mb): c * cb for m, c in a.items()})
        out: dict[Monomial, int] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self._terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return format_poly(self)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        total = 0
        for m, c in self._terms.items():
            val = c
            for v, e in m:
                try:
                    x = assignment[v]
                except KeyError:
                    raise UnboundVariable(v) from None
                val *= x ** e
            total += val
        return total

    def substitute(self, assignment: Mapping[str, "Poly | int"]) -> "Poly":
        """Replace some variables by ring elements; others stay symbolic."""
        out = Poly.const(0)
        for m, c in self._terms.items():
            term = Poly._raw({tuple((v, e) for v, e in m if v not in assignment): c})
            for v, e in m:
                if v in assignment:
                    term = term * Poly.coerce(assignment[v]) ** e
            out = out + term
        return out

    def sign_normalized(self) -> "Poly":
        """Return +self or -self so the all-ones value is >= 0.

        Falls back to a positive leading coefficient when the all-ones value
        vanishes.
        """
        ones = sum(self._terms.values())
        if ones < 0 or (ones == 0 and self._terms and self.leading_term()[1] < 0):
            return -self
        return self


def add(a, b) -> Poly:
    return Poly.coerce(a) + Poly.coerce(b)


def mul(a, b) -> Poly:
    return Poly.coerce(a) * Poly.coerce(b)


def neg(a) -> Poly:
    return -Poly.coerce(a)


def evaluate(a, assignment: Mapping[str, int]) -> int:
    return Poly.coerce(a).evaluate(assignment)


def exact_div(a, b) -> Poly:
    """Return ``q`` with ``q * b == a``; raise :class:`NotDivisible` otherwise.

    Multivariate long division against the single divisor ``b`` under the lex
    order. In an integral domain the quotient is unique, so a leading term of
    the running remainder that ``lt(b)`` fails to divide proves ``b`` does not
    divide ``a``.
    """
    a, b = Poly.coerce(a), Poly.coerce(b)
    if b.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if a.is_zero():
        return a
    if b.is_constant():
        c = b.constant_value()
        out = {}
        for m, x in a.terms.items():
            q, r = divmod(x, c)
            if r:
                raise NotDivisible(f"{a} is not divisible by {b}")
            out[m] = q
        return Poly._raw(out)
    lm_b, lc_b = b.leading_term()
    quotient: dict[Monomial, int] = {}
    rem = a
    while not rem.is_zero():
        lm_r, lc_r = rem.leading_term()
        m = _mono_div(lm_r, lm_b)
        if m is None or lc_r % lc_b:
            raise NotDivisible(f"{a} is not divisible by {b}")
        c = lc_r // lc_b
        quotient[m] = quotient.get(m, 0) + c
        rem = rem - Poly._raw({m: c}) * b
    return Poly(quotient)


# text form

def format_poly(p: Poly, compact: bool = False) -> str:
    """Canonical text: terms in descending lex order, ``-3*x^2*y + 1``.

    Unit coefficients are omitted in front of monomials. ``compact`` drops the
    spaces so the result is a single token (used for weights in pbg files).
    """
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms, key=_lex_key):
        c = p.terms[m]
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    sep = "{}" if compact else " {} "
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sep.format(sign) + body
    return out


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def parse_poly(text: str) -> Poly:
    """Parse the text form written by :func:`format_poly` (either spacing)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    if not tokens:
        raise RingParseError(f"empty ring element {text!r}")

    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def factor() -> Poly:
        nonlocal i
        kind, val = peek()
        if kind == "int":
            i += 1
            return Poly.const(val)
        if kind == "var":
            i += 1
            base = Poly.var(val)
            if peek() == ("op", "^"):
                i += 1
                k2, exp = peek()
                if k2 != "int":
                    raise RingParseError(f"exponent expected in {text!r}")
                i += 1
                return base ** exp
            return base
        raise RingParseError(f"unexpected token {val!r} in {text!r}")

    def term() -> Poly:
        nonlocal i
        out = factor()
        while peek() == ("op", "*"):
            i += 1
            out = out * factor()
        return out

    total = Poly.const(0)
    sign = 1
    if peek() in (("op", "-"), ("op", "+")):
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    total = total + term() * sign
    while i < len(tokens):
        kind, val = peek()
        if kind != "op" or val not in "+-":
            raise RingParseError(f"unexpected token {val!r} in {text!r}")
        i += 1
        total = total + term() * (-1 if val == "-" else 1)
    return total


# matrices

@dataclass(frozen=True)
class RingMatrix:
    """Matrix with labeled rows and columns; absent entries are zero."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: Mapping[tuple[str, str], Poly] = field(default_factory=dict)

    def __getitem__(self, key: tuple[str, str]) -> Poly:
        return self.entries.get(key, _ZERO)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def to_lists(self) -> list[list[Poly]]:
        return [[self[r, c] for c in self.cols] for r in self.rows]

    @classmethod
    def from_lists(cls, rows: Iterable[Iterable["Poly | int | str"]]) -> "RingMatrix":
        data = [[Poly.coerce(x) for x in row] for row in rows]
        n = len(data)
        m = len(data[0]) if data else 0
        rlab = tuple(str(i) for i in range(n))
        clab = tuple(str(j) for j in range(m))
        entries = {
            (rlab[i], clab[j]): x
            for i, row in enumerate(data)
            for j, x in enumerate(row)
            if x
        }
        return cls(rlab, clab, entries)


_ZERO = Poly.const(0)


def determinant(m: RingMatrix) -> Poly:
    """Exact determinant for the given row/column order.

    Integer matrices go through fraction-free (Bareiss) elimination; matrices
    with variable entries use the division-free Berkowitz recurrence.
    """
    if not m.is_square():
        raise NotSquare(f"matrix is {m.shape[0]}x{m.shape[1]}")
    n = len(m.rows)
    if n == 0:
        return Poly.const(1)
    ridx = {r: i for i, r in enumerate(m.rows)}
    cidx = {c: j for j, c in enumerate(m.cols)}
    sparse: list[dict[int, Poly]] = [dict() for _ in range(n)]
    for (r, c), x in m.entries.items():
        if x:
            sparse[ridx[r]][cidx[c]] = x
    if all(x.is_constant() for row in sparse for x in row.values()):
        dense = [[0] * n for _ in range(n)]
        for i, row in enumerate(sparse):
            for j, x in row.items():
                dense[i][j] = x.constant_value()
        return Poly.const(bareiss_det(dense))
    return berkowitz_det(sparse, n)


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if aik == 0:
                for j in range(k + 1, n):
                    rowi[j] = rowi[j] * akk // prev
            else:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def berkowitz_det(rows: list[dict[int, Poly]], n: int) -> Poly:
    """Division-free determinant over a commutative ring, O(n^4) ring ops.

    ``rows[i]`` maps column index to a nonzero entry. The characteristic
    polynomial coefficients of the leading principal submatrices are built up
    one row at a time; ``det = (-1)^n * c_n``.
    """
    zero = _ZERO
    vect: list[Poly] = [Poly.const(1), -rows[0].get(0, zero)]
    for k in range(1, n):
        # Column k above the diagonal and row k left of it.
        col = [rows[i].get(k, zero) for i in range(k)]
        row_k = {j: x for j, x in rows[k].items() if j < k}
        akk = rows[k].get(k, zero)
        sub = [{j: x for j, x in rows[i].items() if j < k} for i in range(k)]
        toeplitz = [Poly.const(1), -akk]
        v = col
        for step in range(k):
            s = zero
            for j, x in row_k.items():
                if v[j]:
                    s = s + x * v[j]
            toeplitz.append(-s)
            if step < k - 1:
                nv = []
                for i in range(k):
                    acc = zero
                    for j, x in sub[i].items():
                        if v[j]:
                            acc = acc + x * v[j]
                    nv.append(acc)
                v = nv
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                t = toeplitz[i - j]
                if t and vect[j]:
                    acc = acc + t * vect[j]
            new.append(acc)
        vect = new
    det = vect[n]
    return det if n % 2 == 0 else -det
