"""Exact sparse polynomials over the rationals and the bialgebra maps of k[M_n].

A :class:`Polynomial` lives in an explicit ambient ring, given as a tuple of
variable names.  Terms are stored as a dict from exponent tuples to nonzero
rational coefficients (``int`` or ``Fraction``; integral fractions are stored
as ``int``).  Values are immutable once built.

The coordinate ring of the matrix monoid M_n uses variables ``x11 .. xnn``.
Tensor powers k[M_n] (x) k[M_n] are realized as polynomials in two disjoint
matrix variable sets, so that comultiplication is ``f(X) -> f(YZ)``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping

__all__ = [
    "AmbientMismatch",
    "ParseError",
    "Polynomial",
    "VariableSet",
    "auxiliary_variables",
    "comultiply",
    "convolve",
    "determinant",
    "evaluate_at_identity",
    "evaluate_at_zero",
    "form_coefficients",
    "matrix_of",
    "matrix_variables",
    "mat_mul",
    "parse",
    "ring",
    "transpose",
]


class AmbientMismatch(ValueError):
    """Raised when two polynomials from different ambient rings are combined."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def _norm(c):
    """Canonical coefficient: Fraction with denominator 1 becomes int."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _as_rational(c) -> Rational:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c))
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


# ---------------------------------------------------------------------------
# variable sets


@dataclass(frozen=True)
class VariableSet:
    """An ordered block of variable names with a declared role.

    ``kind`` is one of ``"matrix"``, ``"form"`` or ``"aux"``.  Matrix sets
    have ``n*n`` names ``<tag>ij`` in row-major order.
    """

    kind: str
    names: tuple[str, ...]
    n: int | None = None
    tag: str = ""

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if self.kind == "matrix" and (self.n is None or len(self.names) != self.n * self.n):
            raise ValueError("matrix variable set needs exactly n^2 names")

    def __add__(self, other: "VariableSet") -> tuple[str, ...]:
        return ring(self, other)

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def name(self, i: int, j: int) -> str:
        """Entry (i, j) of a matrix set, 1-based."""
        return self.names[(i - 1) * self.n + (j - 1)]


def matrix_variables(n: int, tag: str = "x") -> VariableSet:
    if not 1 <= n <= 9:
        raise ValueError("matrix size must be between 1 and 9")
    names = tuple(f"{tag}{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))
    return VariableSet("matrix", names, n, tag)


_LETTERS = "abcdefghijklmnopqrsw"


def form_coefficients(d: int) -> VariableSet:
    """Coefficient names a, b, c, ... of a binary form of degree ``d``."""
    if d + 1 > len(_LETTERS):
        names = tuple(f"c{i}" for i in range(d + 1))
    else:
        names = tuple(_LETTERS[: d + 1])
    return VariableSet("form", names, None, "coef")


def auxiliary_variables(tag: str, names: Iterable[str]) -> VariableSet:
    return VariableSet("aux", tuple(names), None, tag)


_RINGS: dict[tuple[str, ...], tuple[str, ...]] = {}


def ring(*parts) -> tuple[str, ...]:
    """Concatenate variable sets / name sequences into an interned ambient tuple."""
    names: list[str] = []
    for part in parts:
        if isinstance(part, str):
            names.append(part)
        else:
            names.extend(part)
    key = tuple(names)
    if len(set(key)) != len(key):
        raise ValueError(f"duplicate variables in ring {key}")
    return _RINGS.setdefault(key, key)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables, terms: Mapping[tuple[int, ...], object] | None = None):
        self.variables = ring(variables)
        k = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != k:
                raise ValueError("exponent vector has wrong arity")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = _as_rational(c)
            if c:
                clean[exps] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: ``terms`` already normalized, no zeros
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- constructors
    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        variables = ring(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "Polynomial":
        variables = ring(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise AmbientMismatch(f"unknown variable {name!r}") from None
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables, exps, c=1) -> "Polynomial":
        return cls(variables, {tuple(exps): c})

    # -- basic queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if self.variables == other.variables:
                return self.terms == other.terms
            return False
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficient(self, exps) -> Fraction:
        return Fraction(self.terms.get(tuple(exps), 0))

    def constant_term(self) -> Fraction:
        return Fraction(self.terms.get((0,) * len(self.variables), 0))

    def is_constant(self) -> bool:
        z = (0,) * len(self.variables)
        return all(e == z for e in self.terms)

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def content(self) -> Fraction:
        """Positive rational g such that self/g has coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        cs = [Fraction(c) for c in self.terms.values()]
        den = math.lcm(*(c.denominator for c in cs))
        num = math.gcd(*(int(c * den) for c in cs))
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Integer-coefficient, content-free, leading coefficient positive."""
        if not self.terms:
            return self
        p = self.scale(1 / self.content())
        if p.leading_coefficient() < 0:
            p = -p
        return p

    def sorted_terms(self):
        """Terms in graded-lex order (largest first) on the ambient order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_term(self):
        return max(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def leading_coefficient(self) -> Fraction:
        return Fraction(self.leading_term()[1]) if self.terms else Fraction(0)

    # -- ring changes
    def over(self, variables) -> "Polynomial":
        """Re-embed into another ambient that contains every used variable."""
        variables = ring(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for i, v in enumerate(self.variables):
            j = pos.get(v)
            idx.append(j)
        k = len(variables)
        out = {}
        for e, c in self.terms.items():
            new = [0] * k
            for i, a in enumerate(e):
                if a:
                    j = idx[i]
                    if j is None:
                        raise AmbientMismatch(f"variable {self.variables[i]!r} missing from target ring")
                    new[j] = a
            out[tuple(new)] = c
        return Polynomial._raw(variables, out)

    def rename(self, mapping: Mapping[str, str], variables=None) -> "Polynomial":
        """Rename variables; the result lives in ``variables`` (default: renamed ambient)."""
        renamed = ring(tuple(mapping.get(v, v) for v in self.variables))
        p = Polynomial._raw(renamed, self.terms)
        return p if variables is None else p.over(variables)

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise AmbientMismatch(f"ambient mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.variables, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        c = _as_rational(c)
        if not c:
            return Polynomial._raw(self.variables, {})
        if c == 1:
            return self
        return Polynomial._raw(self.variables, {e: _norm(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        return Polynomial._raw(self.variables, {e: _norm(c) for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps, c=1) -> "Polynomial":
        c = _as_rational(c)
        if not c:
            return Polynomial._raw(self.variables, {})
        return Polynomial._raw(
            self.variables,
            {tuple([x + y for x, y in zip(e, exps)]): _norm(v * c) for e, v in self.terms.items()},
        )

    def divide_exact(self, divisor: "Polynomial") -> "Polynomial | None":
        """Quotient q with self == q*divisor, or None if divisor does not divide.

        Plain multivariate division by a single polynomial in graded-lex order;
        the remainder vanishes exactly when the divisor divides.
        """
        self._check(divisor)
        if not divisor:
            raise ZeroDivisionError("division by zero polynomial")
        lead_e, lead_c = divisor.leading_term()
        key = lambda t: (sum(t[0]), t[0])  # noqa: E731
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e, c = max(rem.items(), key=key)
            diff = tuple(a - b for a, b in zip(e, lead_e))
            if any(d < 0 for d in diff):
                return None
            if isinstance(c, int) and isinstance(lead_c, int) and c % lead_c == 0:
                q = c // lead_c
            else:
                q = _norm(Fraction(c) / lead_c)
            quot[diff] = q
            for de, dc in divisor.terms.items():
                t = tuple(a + b for a, b in zip(de, diff))
                v = rem.get(t, 0) - q * dc
                if v:
                    rem[t] = _norm(v)
                else:
                    rem.pop(t, None)
        return Polynomial._raw(self.variables, quot)

    # -- calculus and evaluation
    def derivative(self, name: str) -> "Polynomial":
        try:
            i = self.variables.index(name)
        except ValueError:
            raise AmbientMismatch(f"unknown variable {name!r}") from None
        out = {}
        for e, c in self.terms.items():
            a = e[i]
            if a:
                ne = list(e)
                ne[i] = a - 1
                out[tuple(ne)] = c * a
        return Polynomial._raw(self.variables, out)

    def substitute(self, mapping: Mapping[str, "Polynomial | int | Fraction"], variables=None) -> "Polynomial":
        """Replace variables by polynomials.

        All images must share one target ambient (``variables`` if given).
        Unmapped variables are kept and must exist in the target ambient.
        """
        target = None
        if variables is not None:
            target = ring(variables)
        else:
            for img in mapping.values():
                if isinstance(img, Polynomial):
                    target = img.variables
                    break
            if target is None:
                target = self.variables
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Polynomial):
                    img = Polynomial.constant(target, img)
                elif img.variables != target:
                    img = img.over(target)
            else:
                img = Polynomial.var(target, v)
            images.append(img)
        one = Polynomial.constant(target, 1)
        powers: list[dict[int, Polynomial]] = [{0: one, 1: img} for img in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                h = k // 2
                cache[k] = power(i, h) * power(i, k - h)
            return cache[k]

        acc: dict = {}
        for e, c in self.terms.items():
            term = None
            for i, a in enumerate(e):
                if a:
                    p = power(i, a)
                    term = p if term is None else term * p
                    if not term:
                        break
            if term is None:
                term = one
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + tc * c
        return Polynomial._raw(target, {e: _norm(c) for e, c in acc.items() if c})

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at rational values for every used variable."""
        vals = []
        for v in self.variables:
            if v in values:
                vals.append(_as_rational(values[v]))
            else:
                vals.append(None)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for a, x in zip(e, vals):
                if a:
                    if x is None:
                        raise AmbientMismatch("evaluation point misses a used variable")
                    t *= x ** a
            total += t
        return total

    def set_zero(self, names: Iterable[str]) -> "Polynomial":
        """Specialize the listed variables to 0 (result stays in the same ambient)."""
        idx = [self.variables.index(v) for v in names]
        return Polynomial._raw(
            self.variables, {e: c for e, c in self.terms.items() if not any(e[i] for i in idx)}
        )

    # -- printing
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r})"


# ---------------------------------------------------------------------------
# text format


def _fmt_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(variables, e) -> str:
    parts = []
    for v, a in zip(variables, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def to_text(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        c = Fraction(c)
        neg = c < 0
        a = -c if neg else c
        mono = _fmt_monomial(p.variables, e)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, text: str, variables):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1)), start))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", start, text)
                self.tokens.append(("op", ch, start))
            pos = m.end()
        self.tokens.append(("end", None, len(text)))
        self.i = 0
        if variables is None:
            names = []
            for kind, val, _ in self.tokens:
                if kind == "name" and val not in names:
                    names.append(val)
            variables = _default_order(names)
        self.variables = ring(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch):
        kind, val, pos = self.take()
        if kind != "op" or val != ch:
            raise ParseError(f"expected {ch!r}", pos, self.text)

    def parse(self) -> Polynomial:
        kind, _, pos = self.peek()
        if kind == "end":
            raise ParseError("empty expression", pos, self.text)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos, self.text)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise ParseError("division only by integer literals", p2, self.text)
                if v2 == 0:
                    raise ParseError("division by zero", p2, self.text)
                acc = acc.scale(Fraction(1, v2))
            else:
                return acc

    def factor(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            base = Polynomial.constant(self.variables, val)
        elif kind == "name":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            base = Polynomial.var(self.variables, val)
        elif kind == "op" and val == "(":
            base = self.expr()
            self.expect_op(")")
        elif kind == "op" and val == "-":
            return -self.factor()
        else:
            raise ParseError("expected a number, variable or '('", pos, self.text)
        k2, v2, _ = self.peek()
        if k2 == "op" and v2 == "^":
            self.take()
            k3, v3, p3 = self.take()
            if k3 != "num":
                raise ParseError("exponent must be a nonnegative integer", p3, self.text)
            base = base ** v3
        return base


def _default_order(names: list[str]) -> tuple[str, ...]:
    """Matrix-style names sort by tag then index; others alphabetically."""

    def key(v):
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", v)
        if m:
            return (m.group(1), int(m.group(2)), v)
        return (v, -1, v)

    return tuple(sorted(names, key=key))


def parse(text: str, variables=None) -> Polynomial:
    """Parse the plain-text format, e.g. ``"x11*x22 - x12*x21"`` or ``"3/2*a^2 + b"``.

    Without ``variables`` the ambient is the sorted set of names that occur.
    """
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# matrices of polynomials

Matrix = tuple  # tuple of row tuples of Polynomial


def matrix_of(vs: VariableSet, variables=None) -> Matrix:
    """The generic matrix of a matrix variable set, inside ``variables``."""
    variables = ring(variables if variables is not None else vs)
    n = vs.n
    return tuple(
        tuple(Polynomial.var(variables, vs.name(i, j)) for j in range(1, n + 1)) for i in range(1, n + 1)
    )


def identity_matrix(n: int, variables) -> Matrix:
    variables = ring(variables)
    return tuple(
        tuple(Polynomial.constant(variables, 1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    variables = A[0][0].variables
    rows = []
    for row in A:
        out = []
        for j in range(len(B[0])):
            acc = Polynomial.zero(variables)
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = acc + a * B[k][j]
            out.append(acc)
        rows.append(tuple(out))
    return tuple(rows)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def _perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def permutations_with_sign(n: int):
    return [(p, _perm_sign(p)) for p in itertools.permutations(range(n))]


def determinant(A: Matrix) -> Polynomial:
    """Leibniz expansion; intended for n <= 4."""
    n = len(A)
    variables = A[0][0].variables
    acc = Polynomial.zero(variables)
    for p, sign in permutations_with_sign(n):
        term = Polynomial.constant(variables, sign)
        for i in range(n):
            term = term * A[i][p[i]]
            if not term:
                break
        acc = acc + term
    return acc


def adjugate(A: Matrix) -> Matrix:
    n = len(A)
    variables = A[0][0].variables
    if n == 1:
        return ((Polynomial.constant(variables, 1),),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                tuple(A[r][c] for c in range(n) if c != j) for r in range(n) if r != i
            )
            row.append(determinant(minor).scale((-1) ** (i + j)))
        cof.append(tuple(row))
    return transpose(tuple(cof))


def substitute_matrix(f: Polynomial, vs: VariableSet, M: Matrix, variables=None) -> Polynomial:
    """f(M): replace the generic matrix of ``vs`` by ``M`` entrywise."""
    mapping = {vs.name(i + 1, j + 1): M[i][j] for i in range(vs.n) for j in range(vs.n)}
    return f.substitute(mapping, variables if variables is not None else M[0][0].variables)


# ---------------------------------------------------------------------------
# bialgebra structure of k[M_n]


def _matrix_set_of(f: Polynomial, n: int | None = None, tag: str = "x") -> VariableSet:
    if n is None:
        k = math.isqrt(len(f.variables))
        if k * k != len(f.variables):
            raise AmbientMismatch("polynomial is not in a matrix coordinate ring")
        n = k
    vs = matrix_variables(n, tag)
    if f.variables != vs.names:
        raise AmbientMismatch(f"expected ambient {vs.names}, got {f.variables}")
    return vs


def comultiply(f: Polynomial, n: int | None = None, left: str = "y", right: str = "z") -> Polynomial:
    """Delta(f) realized as f(YZ) in two fresh matrix variable sets."""
    vs = _matrix_set_of(f, n)
    Y, Z = matrix_variables(vs.n, left), matrix_variables(vs.n, right)
    R = ring(Y, Z)
    return substitute_matrix(f, vs, mat_mul(matrix_of(Y, R), matrix_of(Z, R)), R)


def evaluate_at_identity(f: Polynomial, n: int | None = None) -> Fraction:
    """The counit: f(Id)."""
    vs = _matrix_set_of(f, n)
    return f.evaluate({vs.name(i, j): int(i == j) for i in range(1, vs.n + 1) for j in range(1, vs.n + 1)})


def evaluate_at_zero(f: Polynomial) -> Fraction:
    """nu(f) = f(0), the constant term."""
    return f.constant_term()


def convolve(
    T: Callable[[Polynomial], Polynomial],
    S: Callable[[Polynomial], Polynomial],
    f: Polynomial,
    n: int | None = None,
) -> Polynomial:
    """(T * S)(f) = sum T(f_1) S(f_2).

    T and S must be linear on k[M_n]; they are only ever called on the
    finitely many monomials (and their partner sums) occurring in f(YZ).
    """
    vs = _matrix_set_of(f, n)
    k = len(vs)
    delta = comultiply(f, vs.n)
    # group f(YZ) = sum_a y^a (x) g_a(z)
    groups: dict[tuple, dict] = {}
    for e, c in delta.terms.items():
        groups.setdefault(e[:k], {})[e[k:]] = c
    acc = Polynomial.zero(vs.names)
    for ya, zpart in sorted(groups.items()):
        left = T(Polynomial._raw(vs.names, {ya: 1}))
        if not left:
            continue
        right = S(Polynomial._raw(vs.names, dict(zpart)))
        acc = acc + left * right
    return acc
