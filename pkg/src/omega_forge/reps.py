"""Finite-dimensional polynomial M_n-modules given by coefficient matrices.

A module is a matrix ``C(X)`` of polynomials in the generic matrix ``X``; the
comodule map is ``chi(e_i) = sum_j e_j (x) C[j][i]``, i.e. ``X . v = C(X) v``.
Axioms: ``C(Id) = Id`` and ``C(XY) = C(X) C(Y)``.

Side conventions:

* binary forms carry ``(m.F)(u, v) = F((u, v) m)``;
* the coefficient-function module of V is ``C*(X) = C(X^T)^T``, a left
  module over M_n; on functionals it reads ``(m.phi)(p) = phi(C(m^T) p)``,
  which makes ``b^2 - 4ac`` a semi-invariant of weight det^2;
* ``contragredient`` is the group dual ``C(X^-1)^T`` over k[GL_n] and is in
  general only rational.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .linalg import nullspace
from .polycore import (
    Polynomial,
    adjugate,
    auxiliary_variables,
    determinant,
    form_coefficients,
    mat_mul,
    matrix_of,
    matrix_variables,
    parse,
    ring,
    substitute_matrix,
    to_text,
    transpose,
)

DEFAULT_CAP = 200


class DimensionCapExceeded(ValueError):
    pass


def dimension_cap() -> int:
    """Symmetric-power dimension cap; ``OMEGA_FORGE_CAP`` overrides the default."""
    raw = os.environ.get("OMEGA_FORGE_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class Character:
    """det^power on M_n (a polynomial character iff power >= 0)."""

    n: int
    power: int

    def is_polynomial(self) -> bool:
        return self.power >= 0

    def polynomial(self) -> Polynomial:
        if self.power < 0:
            raise ValueError("det^k with k < 0 is not polynomial")
        return _det(self.n) ** self.power


_DETS: dict[int, Polynomial] = {}


def _det(n: int) -> Polynomial:
    if n not in _DETS:
        _DETS[n] = determinant(matrix_of(matrix_variables(n)))
    return _DETS[n]


def _is_identifier(s: str) -> bool:
    return s.isidentifier()


@dataclass(frozen=True)
class PolynomialComodule:
    n: int
    labels: tuple[str, ...]
    C: tuple  # dim x dim tuple of Polynomial in x11..xnn
    twist: int = 0
    name: str = ""
    # symmetric powers remember their monomial basis
    base_symbols: tuple[str, ...] | None = None
    exponents: tuple[tuple[int, ...], ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def variables(self) -> tuple[str, ...]:
        return matrix_variables(self.n).names

    def symbols(self) -> tuple[str, ...]:
        """Identifier names for the basis, used when forming symmetric algebras."""
        if all(_is_identifier(l) for l in self.labels):
            return self.labels
        return tuple(f"e{i}" for i in range(self.dim))

    def entry_degrees(self) -> set[int]:
        return {e.degree() for row in self.C for e in row if e}

    def act(self, v: Sequence) -> tuple[Polynomial, ...]:
        """C(X) v as a vector of polynomials."""
        zero = Polynomial.zero(self.variables)
        out = []
        for row in self.C:
            acc = zero
            for c, a in zip(row, v):
                if a and c:
                    acc = acc + c.scale(a)
            out.append(acc)
        return tuple(out)

    def evaluate(self, point: dict) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(e.evaluate(point) for e in row) for row in self.C)

    def at_zero(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(e.constant_term() for e in row) for row in self.C)


@dataclass(frozen=True)
class RationalRep:
    """det^(-den) * N(X), a representation over k[GL_n] = k[M_n]_det."""

    n: int
    labels: tuple[str, ...]
    N: tuple
    den: int
    twist: int = 0
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def variables(self) -> tuple[str, ...]:
        return matrix_variables(self.n).names


# ---------------------------------------------------------------------------
# constructions


def _poly_matrix(rows, variables) -> tuple:
    return tuple(tuple(e if isinstance(e, Polynomial) else Polynomial.constant(variables, e) for e in row) for row in rows)


def trivial_module(n: int = 2) -> PolynomialComodule:
    X = matrix_variables(n)
    return PolynomialComodule(n, ("1",), ((Polynomial.constant(X.names, 1),),), 0, "trivial")


def character_module(n: int, k: int = 1) -> PolynomialComodule:
    """The one-dimensional module k_{det^k}, C = [det^k]."""
    if k < 0:
        raise ValueError("use twist() for negative powers")
    name = "trivial" if k == 0 else ("k_det" if k == 1 else f"k_det^{k}")
    return PolynomialComodule(n, ("1",), ((_det(n) ** k,),), 0, name)


def standard_module(n: int, verify: bool = True) -> PolynomialComodule:
    """Linear forms in u_1..u_n with (m.F)(u) = F(u m); C(X) = X."""
    X = matrix_variables(n)
    C = matrix_of(X)
    V = PolynomialComodule(n, tuple(f"u{i}" for i in range(1, n + 1)), C, 0, f"std({n})")
    if verify:
        require_comodule(V)
    return V


def form_basis_labels(d: int) -> tuple[str, ...]:
    def mono(i):
        parts = []
        for var, a in (("u", d - i), ("v", i)):
            if a == 1:
                parts.append(var)
            elif a > 1:
                parts.append(f"{var}{a}")
        return "".join(parts) or "one"

    return tuple(mono(i) for i in range(d + 1))


def binary_forms_module(d: int, verify: bool = True) -> PolynomialComodule:
    """Binary forms of degree d with (m.F)(u, v) = F((u, v) m); basis u^(d-i) v^i."""
    if d < 1:
        raise ValueError("d must be at least 1")
    X = matrix_variables(2)
    uv = auxiliary_variables("uv", ("u", "v"))
    R = ring(uv, X)
    u, v = Polynomial.var(R, "u"), Polynomial.var(R, "v")
    x = {name: Polynomial.var(R, name) for name in X.names}
    new_u = u * x["x11"] + v * x["x21"]
    new_v = u * x["x12"] + v * x["x22"]
    cols = []
    for i in range(d + 1):
        image = new_u ** (d - i) * new_v ** i
        col = [dict() for _ in range(d + 1)]
        for e, c in image.terms.items():
            j = e[1]  # power of v
            col[j][e[2:]] = c
        cols.append([Polynomial(X.names, t) for t in col])
    C = tuple(tuple(cols[i][j] for i in range(d + 1)) for j in range(d + 1))
    V = PolynomialComodule(2, form_basis_labels(d), C, 0, f"forms({d})")
    if verify:
        require_comodule(V)
    return V


def _transpose_args(p: Polynomial, n: int) -> Polynomial:
    """p(X^T)."""
    X = matrix_variables(n)
    return p.rename({X.name(i, j): X.name(j, i) for i in range(1, n + 1) for j in range(1, n + 1)}, X.names)


def dual_action_module(V: PolynomialComodule, labels: Sequence[str] | None = None, verify: bool = True) -> PolynomialComodule:
    """Coefficient functions on V as a left module: C*(X) = C(X^T)^T.

    For ``forms(d)`` the dual basis is named a, b, c, ... (coefficients of the form).
    """
    if labels is None:
        if V.name.startswith("forms("):
            labels = form_coefficients(V.dim - 1).names
        elif V.name.startswith("dual(") and V.base_symbols is None:
            labels = tuple(l[:-1] if l.endswith("'") else l for l in V.labels)
        else:
            labels = tuple(f"{l}'" for l in V.labels)
    labels = tuple(labels)
    Ct = tuple(tuple(_transpose_args(e, V.n) for e in row) for row in V.C)
    C = transpose(Ct)
    name = V.name[5:-1] if V.name.startswith("dual(") else f"dual({V.name})"
    W = PolynomialComodule(V.n, labels, C, V.twist, name)
    if verify:
        require_comodule(W)
    return W


def symmetric_power(V: PolynomialComodule, e: int, cap: int | None = None, verify: bool = True) -> PolynomialComodule:
    """S^e(V) on the monomial basis of degree e (graded-lex order, largest first)."""
    if e < 1:
        raise ValueError("e must be at least 1")
    cap = dimension_cap() if cap is None else cap
    dim = math.comb(V.dim + e - 1, e)
    if dim > cap:
        raise DimensionCapExceeded(f"S^{e} of a {V.dim}-dimensional module has dimension {dim} > cap {cap}")
    syms = V.symbols()
    k = V.dim
    exps = sorted(
        (t for t in itertools.product(range(e + 1), repeat=k) if sum(t) == e), reverse=True
    )
    index = {t: i for i, t in enumerate(exps)}
    X = matrix_variables(V.n)
    R = ring(syms, X)
    # image of each base vector as a linear form in the symbols
    images = []
    for i in range(k):
        acc = Polynomial.zero(R)
        for j in range(k):
            c = V.C[j][i]
            if c:
                acc = acc + c.over(R) * Polynomial.var(R, syms[j])
        images.append(acc)
    powers = [{0: Polynomial.constant(R, 1), 1: images[i]} for i in range(k)]

    def power(i, a):
        cache = powers[i]
        if a not in cache:
            cache[a] = power(i, a - 1) * images[i]
        return cache[a]

    cols = []
    for alpha in exps:
        img = Polynomial.constant(R, 1)
        for i, a in enumerate(alpha):
            if a:
                img = img * power(i, a)
        col = [dict() for _ in exps]
        for ex, c in img.terms.items():
            col[index[ex[:k]]][ex[k:]] = c
        cols.append([Polynomial._raw(X.names, t) for t in col])
    C = tuple(tuple(cols[i][j] for i in range(dim)) for j in range(dim))
    labels = tuple(to_text(Polynomial.monomial(syms, t)) for t in exps)
    W = PolynomialComodule(V.n, labels, C, V.twist * e, f"S^{e}({V.name})", syms, tuple(exps))
    if e == 1:
        W = replace(W, labels=V.labels, base_symbols=None, exponents=None, name=V.name)
    if verify:
        require_comodule(W)
    return W


def tensor(V, W):
    """Kronecker product of two modules (polynomial or rational)."""
    if V.n != W.n:
        raise ValueError("matrix sizes differ")
    A = V.C if isinstance(V, PolynomialComodule) else V.N
    B = W.C if isinstance(W, PolynomialComodule) else W.N
    rows = []
    for i in range(V.dim):
        for k in range(W.dim):
            rows.append(tuple(A[i][j] * B[k][l] for j in range(V.dim) for l in range(W.dim)))
    labels = tuple(f"{a}|{b}" for a in V.labels for b in W.labels)
    den = getattr(V, "den", 0) + getattr(W, "den", 0)
    name = f"({V.name} x {W.name})"
    if den:
        return normalize(RationalRep(V.n, labels, tuple(rows), den, V.twist + W.twist, name))
    return PolynomialComodule(V.n, labels, tuple(rows), V.twist + W.twist, name)


def twist(V, k: int):
    """Multiply the action by det^k; negative k leaves the polynomial world."""
    if isinstance(V, PolynomialComodule):
        if k >= 0:
            d = _det(V.n) ** k
            C = tuple(tuple(e * d for e in row) for row in V.C)
            return PolynomialComodule(V.n, V.labels, C, V.twist + k, V.name)
        return normalize(RationalRep(V.n, V.labels, V.C, -k, V.twist + k, V.name))
    return normalize(RationalRep(V.n, V.labels, V.N, V.den - k, V.twist + k, V.name))


def normalize(R: RationalRep):
    """Cancel common det factors; returns a PolynomialComodule when no denominator remains."""
    d = _det(R.n)
    N, den = R.N, R.den
    if den < 0:
        f = d ** (-den)
        N = tuple(tuple(e * f for e in row) for row in N)
        den = 0
    while den > 0:
        q = _divide_all(N, d)
        if q is None:
            break
        N, den = q, den - 1
    if den == 0:
        return PolynomialComodule(R.n, R.labels, N, R.twist, R.name)
    return RationalRep(R.n, R.labels, N, den, R.twist, R.name)


def _divide_all(M, d: Polynomial):
    out = []
    for row in M:
        new = []
        for e in row:
            if not e:
                new.append(e)
                continue
            q = e.divide_exact(d)
            if q is None:
                return None
            new.append(q)
        out.append(tuple(new))
    return tuple(out)


def det_valuation(M) -> int | None:
    """Largest a with det^a dividing every entry (None for the zero matrix)."""
    entries = [e for row in M for e in row if e]
    if not entries:
        return None
    n = math.isqrt(len(entries[0].variables))
    d = _det(n)
    best = None
    for e in entries:
        a = 0
        q = e
        while True:
            nq = q.divide_exact(d) if q.degree() >= n else None
            if nq is None:
                break
            q, a = nq, a + 1
        best = a if best is None else min(best, a)
        if best == 0:
            break
    return best


def minimal_twist_exponent(R) -> int:
    """Least n_V with det^{n_V} C polynomial (negative when C is divisible by det)."""
    M = R.C if isinstance(R, PolynomialComodule) else R.N
    den = getattr(R, "den", 0)
    v = det_valuation(M)
    return den - (v or 0)


def contragredient(V: PolynomialComodule):
    """The group dual X -> C(X^-1)^T, returned normalized (usually a RationalRep)."""
    n = V.n
    X = matrix_variables(n)
    adj = adjugate(matrix_of(X))
    d = _det(n)
    top = max(V.entry_degrees(), default=0)
    rows = []
    for row in V.C:
        new = []
        for e in row:
            acc = Polynomial.zero(X.names)
            for q in range(top + 1):
                part = e.homogeneous_part(q)
                if part:
                    acc = acc + substitute_matrix(part, X, adj, X.names) * d ** (top - q)
            new.append(acc)
        rows.append(tuple(new))
    N = transpose(tuple(rows))
    return normalize(RationalRep(n, tuple(f"{l}^" for l in V.labels), N, top, -V.twist, f"contra({V.name})"))


# ---------------------------------------------------------------------------
# vectors as polynomials


def vector_to_polynomial(V: PolynomialComodule, v: Sequence) -> Polynomial:
    """Read a vector of S^e(W) as a form of degree e in W's symbols (or a linear form otherwise)."""
    if V.exponents is not None:
        syms = V.base_symbols
        return Polynomial(syms, {t: c for t, c in zip(V.exponents, v) if c})
    syms = V.symbols()
    return Polynomial(syms, {tuple(int(i == j) for j in range(V.dim)): c for i, c in enumerate(v) if c})


def polynomial_to_vector(V: PolynomialComodule, p: Polynomial) -> tuple[Fraction, ...]:
    syms = V.base_symbols if V.exponents is not None else V.symbols()
    p = p.over(syms)
    if V.exponents is not None:
        index = {t: i for i, t in enumerate(V.exponents)}
    else:
        index = {tuple(int(i == j) for j in range(V.dim)): i for i in range(V.dim)}
    v = [Fraction(0)] * V.dim
    for e, c in p.terms.items():
        if e not in index:
            raise ValueError("polynomial is not in this module's basis")
        v[index[e]] = Fraction(c)
    return tuple(v)


# ---------------------------------------------------------------------------
# comodule axioms


@dataclass
class ComoduleReport:
    counit: bool
    multiplicative: bool
    zero_idempotent: bool
    method: str
    residual: str = ""

    @property
    def passed(self) -> bool:
        return self.counit and self.multiplicative and self.zero_idempotent


class ComoduleFailure(AssertionError):
    pass


def _matrix_of(V):
    return V.C if isinstance(V, PolynomialComodule) else V.N


def check_counit(V) -> bool:
    M = _matrix_of(V)
    X = matrix_variables(V.n)
    ident = {X.name(i, j): int(i == j) for i in range(1, V.n + 1) for j in range(1, V.n + 1)}
    return all(M[i][j].evaluate(ident) == (1 if i == j else 0) for i in range(V.dim) for j in range(V.dim))


def check_zero_idempotent(V) -> bool:
    """C(0)^2 == C(0); for rational modules (not defined at 0) this is vacuous."""
    if isinstance(V, RationalRep):
        return True
    Z = V.at_zero()
    k = V.dim
    sq = tuple(tuple(sum((Z[i][l] * Z[l][j] for l in range(k)), Fraction(0)) for j in range(k)) for i in range(k))
    return sq == Z


def multiplicativity_residual_symbolic(V) -> Polynomial | None:
    """C(YZ) - C(Y)C(Z) with two generic matrices; returns the first nonzero entry or None."""
    M = _matrix_of(V)
    n = V.n
    X, Y, Z = matrix_variables(n), matrix_variables(n, "y"), matrix_variables(n, "z")
    R = ring(Y, Z)
    YZ = mat_mul(matrix_of(Y, R), matrix_of(Z, R))
    to_y = {X.names[k]: Y.names[k] for k in range(n * n)}
    to_z = {X.names[k]: Z.names[k] for k in range(n * n)}
    MY = tuple(tuple(e.rename(to_y, R) for e in row) for row in M)
    MZ = tuple(tuple(e.rename(to_z, R) for e in row) for row in M)
    prod = mat_mul(MY, MZ)
    for i in range(V.dim):
        for j in range(V.dim):
            lhs = substitute_matrix(M[i][j], X, YZ, R)
            res = lhs - prod[i][j]
            if res:
                return res
    return None


def multiplicativity_residual_infinitesimal(V) -> Polynomial | None:
    """Lie-algebra form of multiplicativity.

    For every elementary direction E_ij, with D_ij = sum_k x_ki d/dx_kj (the
    derivative of C(X (Id + t E_ij)) at t = 0) and N_ij = (D_ij C)(Id), check
    D_ij C(X) == C(X) N_ij exactly.  Together with C(Id) = Id this forces
    C(X g) = C(X) C(g) along each one-parameter family Id + t E_ij (both sides
    solve the same linear ODE in t with the same value at t = 0); those
    families generate GL_n, which is dense in M_n.
    """
    M = _matrix_of(V)
    n = V.n
    X = matrix_variables(n)
    ident = {X.name(i, j): int(i == j) for i in range(1, n + 1) for j in range(1, n + 1)}
    k = V.dim
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            D = []
            for row in M:
                new = []
                for e in row:
                    acc = Polynomial.zero(X.names)
                    for r in range(1, n + 1):
                        de = e.derivative(X.name(r, b))
                        if de:
                            acc = acc + de * Polynomial.var(X.names, X.name(r, a))
                    new.append(acc)
                D.append(new)
            Nab = [[D[i][j].evaluate(ident) for j in range(k)] for i in range(k)]
            for i in range(k):
                for j in range(k):
                    rhs = Polynomial.zero(X.names)
                    for l in range(k):
                        if Nab[l][j] and M[i][l]:
                            rhs = rhs + M[i][l].scale(Nab[l][j])
                    res = D[i][j] - rhs
                    if res:
                        return res
    return None


def _auto_method(V) -> str:
    M = _matrix_of(V)
    top = max((e.degree() for row in M for e in row if e), default=0)
    return "symbolic" if V.dim <= 4 and top <= 4 else "infinitesimal"


def check_comodule(V, method: str = "auto") -> ComoduleReport:
    if method == "auto":
        method = _auto_method(V)
    if method == "symbolic":
        res = multiplicativity_residual_symbolic(V)
    elif method == "infinitesimal":
        res = multiplicativity_residual_infinitesimal(V)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ComoduleReport(
        check_counit(V), res is None, check_zero_idempotent(V), method, "" if res is None else to_text(res)
    )


def require_comodule(V, method: str = "auto"):
    report = check_comodule(V, method)
    if not report.passed:
        raise ComoduleFailure(f"{V.name or 'module'} violates the comodule axioms: {report}")
    return report


# ---------------------------------------------------------------------------
# semi-invariants by brute-force linear algebra


def semi_invariant_equations(V: PolynomialComodule, k: int):
    """Rows of the linear system C(x) v = det^k v, one per (row index, x-monomial)."""
    dk = _det(V.n) ** k
    rows = {}
    for j in range(V.dim):
        for i in range(V.dim):
            for m, c in V.C[j][i].terms.items():
                rows.setdefault((j, m), {})
                rows[(j, m)][i] = rows[(j, m)].get(i, 0) + c
        for m, c in dk.terms.items():
            row = rows.setdefault((j, m), {})
            row[j] = row.get(j, 0) - c
    return [r for r in rows.values() if any(r.values())]


def semi_invariant_oracle(V: PolynomialComodule, k: int, verify: bool = True) -> list[tuple[Fraction, ...]]:
    """Basis of {v : C(x) v = det(x)^k v}, by equating coefficients of every x-monomial.

    The basis is the canonical RREF kernel basis; it is independent of any
    Omega machinery.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    degrees = V.entry_degrees()
    if len(degrees) == 1 and degrees != {V.n * k}:
        return []  # C homogeneous of another degree and C(Id) = Id
    seen = set()
    unique = []
    for row in semi_invariant_equations(V, k):
        key = _row_key(row)
        if key not in seen:
            seen.add(key)
            unique.append(row)
    basis = nullspace(unique, V.dim)
    if verify:
        dk = _det(V.n) ** k
        for v in basis:
            lhs = V.act(v)
            for j, p in enumerate(lhs):
                if p != dk.scale(v[j]):
                    raise ComoduleFailure("oracle solution fails the semi-invariance identity")
    return basis


def _row_key(row: dict) -> tuple:
    items = sorted((j, Fraction(v)) for j, v in row.items() if v)
    lead = items[0][1]
    return tuple((j, v / lead) for j, v in items)


def is_semi_invariant(V: PolynomialComodule, v: Sequence, k: int) -> bool:
    """Direct symbolic check of C(x) v == det^k v."""
    dk = _det(V.n) ** k
    return all(p == dk.scale(v[j]) for j, p in enumerate(V.act(v)))


# ---------------------------------------------------------------------------
# JSON descriptors


def to_descriptor(V) -> dict:
    M = _matrix_of(V)
    out = {
        "dim": V.dim,
        "labels": list(V.labels),
        "entries": [[i, j, to_text(M[i][j])] for i in range(V.dim) for j in range(V.dim) if M[i][j]],
        "twist": V.twist,
    }
    if isinstance(V, RationalRep):
        out["det_denominator"] = V.den
    return out


def from_descriptor(data: dict, n: int = 2):
    X = matrix_variables(n)
    dim = data["dim"]
    zero = Polynomial.zero(X.names)
    M = [[zero] * dim for _ in range(dim)]
    for i, j, text in data["entries"]:
        M[i][j] = parse(text, X.names)
    M = tuple(tuple(r) for r in M)
    labels = tuple(data["labels"])
    den = data.get("det_denominator", 0)
    if den:
        return RationalRep(n, labels, M, den, data.get("twist", 0))
    return PolynomialComodule(n, labels, M, data.get("twist", 0))
