"""The classical Cayley Omega-process on M_n.

``Omega(f) = sum_sigma sgn(sigma) d^n f / dx_{1 sigma(1)} ... dx_{n sigma(n)}``,
a process attached to the character det: ``Omega(f.m) = det(m) Omega(f).m``
and ``Omega(m.f) = det(m) m.Omega(f)``, where ``(f.m)(x) = f(mx)`` and
``(m.f)(x) = f(xm)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import weightlattice as wl
from .polycore import (
    AmbientMismatch,
    Polynomial,
    VariableSet,
    auxiliary_variables,
    determinant,
    evaluate_at_identity,
    mat_mul,
    matrix_of,
    matrix_variables,
    permutations_with_sign,
    ring,
    substitute_matrix,
)


class IdentityFailure(AssertionError):
    """An identity that the theory guarantees failed to hold exactly."""

    def __init__(self, message: str, residual: Polynomial | None = None):
        self.residual = residual
        super().__init__(message if residual is None else f"{message}; residual {residual}")


class OmegaOperator:
    """Omega acting on the matrix variables ``<tag>11 .. <tag>nn``.

    Other variables of a polynomial's ambient are treated as constants.
    """

    def __init__(self, n: int, tag: str = "x"):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        self.tag = tag
        self.matrix = matrix_variables(n, tag)
        self.lam = determinant(matrix_of(self.matrix))
        self._perms = permutations_with_sign(n)

    def __repr__(self):
        return f"OmegaOperator(n={self.n}, tag={self.tag!r})"

    def __call__(self, f: Polynomial) -> Polynomial:
        return omega_apply(self, f)

    def det(self, variables=None) -> Polynomial:
        return self.lam if variables is None else self.lam.over(variables)

    def _indices(self, variables):
        try:
            pos = {v: i for i, v in enumerate(variables)}
            return [
                (sign, [pos[self.matrix.name(i + 1, p[i] + 1)] for i in range(self.n)])
                for p, sign in self._perms
            ]
        except KeyError:
            raise AmbientMismatch(f"{self.matrix.names} not contained in ambient {variables}") from None


def omega_apply(op: OmegaOperator, f: Polynomial) -> Polynomial:
    """Direct expansion of the signed permutation sum of iterated partials."""
    chains = op._indices(f.variables)
    out: dict = {}
    for e, c in f.terms.items():
        for sign, idx in chains:
            factor = 1
            for i in idx:
                a = e[i]
                if not a:
                    factor = 0
                    break
                factor *= a
            if not factor:
                continue
            ne = list(e)
            for i in idx:
                ne[i] -= 1
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + sign * factor * c
    return Polynomial(f.variables, {e: c for e, c in out.items() if c})


def omega_power(op: OmegaOperator, f: Polynomial, r: int) -> Polynomial:
    """Omega^r(f); r = 0 is the identity."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    for _ in range(r):
        if not f:
            break
        f = op(f)
    return f


def nu_omega_power(op: OmegaOperator, g: Polynomial, r: int) -> Polynomial:
    """nu(Omega^r(g)) with nu specializing the operator's matrix variables to 0.

    Omega is det of the matrix of partials, so Omega^r = det^r(d).  For the
    component of g of matrix-degree n*r, pairing monomials gives
    ``nu(x^a(d) x^b) = a! [a == b]``; other degrees die under nu.  The result
    is a polynomial in the remaining variables of g's ambient.
    """
    variables = g.variables
    chains = op._indices(variables)
    mpos = sorted({i for _, idx in chains for i in idx})
    target = op.lam ** r
    weights = {}
    tpos = [target.variables.index(op.matrix.names[k]) for k in range(len(op.matrix))]
    # det^r monomials re-indexed to g's ambient positions
    for e, c in target.terms.items():
        key = tuple(e[tpos[k]] for k in range(len(op.matrix)))
        weights[key] = c * math.prod(math.factorial(a) for a in key)
    order = [variables.index(v) for v in op.matrix.names]
    out: dict = {}
    for e, c in g.terms.items():
        key = tuple(e[i] for i in order)
        w = weights.get(key)
        if w:
            rest = list(e)
            for i in mpos:
                rest[i] = 0
            rest = tuple(rest)
            out[rest] = out.get(rest, 0) + w * c
    return Polynomial(variables, {e: c for e, c in out.items() if c})


# ---------------------------------------------------------------------------
# Cayley constants


@dataclass
class CayleyConstants:
    n: int
    alphas: dict[int, Fraction] = field(default_factory=dict)
    alphas_rs: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    cs: dict[int, Fraction] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alphas": [[s, str(a)] for s, a in sorted(self.alphas.items())],
            "cs": [[s, str(c)] for s, c in sorted(self.cs.items())],
        }

    def is_proper(self) -> bool:
        return all(a != 0 for a in self.alphas.values())


def cayley_constants(op: OmegaOperator, s_max: int) -> CayleyConstants:
    """alpha_s, alpha_{r,s} (r <= s) and c_s for s <= s_max.

    Each alpha_s is recorded only after Omega(det^s) == alpha_s det^(s-1) has
    been checked exactly; likewise Omega^r(det^s) det^r == alpha_{r,s} det^s.
    """
    if s_max < 1:
        raise ValueError("s_max must be at least 1")
    lam = op.lam
    out = CayleyConstants(op.n)
    powers = [Polynomial.constant(lam.variables, 1)]
    for s in range(1, s_max + 1):
        powers.append(powers[-1] * lam)
    c = Fraction(1)
    for s in range(1, s_max + 1):
        image = op(powers[s])
        alpha = evaluate_at_identity(image, op.n)
        residual = image - powers[s - 1].scale(alpha)
        if residual:
            raise IdentityFailure(f"Omega(det^{s}) is not a multiple of det^{s - 1}", residual)
        out.alphas[s] = alpha
        c *= alpha
        out.cs[s] = c
        g = powers[s]
        for r in range(1, s + 1):
            g = op(g)
            a_rs = evaluate_at_identity(g, op.n)
            residual = g * powers[r] - powers[s].scale(a_rs)
            if residual:
                raise IdentityFailure(f"Omega^{r}(det^{s}) det^{r} != alpha_{{{r},{s}}} det^{s}", residual)
            out.alphas_rs[(r, s)] = a_rs
    return out


# ---------------------------------------------------------------------------
# translations and the first rule


def generic_matrix(n: int, tag: str = "y") -> VariableSet:
    return matrix_variables(n, tag)


def right_translate(f: Polynomial, Y: VariableSet, op: OmegaOperator | None = None) -> Polynomial:
    """(f.Y)(X) = f(YX), in the ambient (Y, X)."""
    X = op.matrix if op else matrix_variables(Y.n)
    R = ring(Y, _extra(f, X) or X)
    return substitute_matrix(f.over(R), X, mat_mul(matrix_of(Y, R), matrix_of(X, R)), R)


def left_translate(f: Polynomial, Y: VariableSet, op: OmegaOperator | None = None) -> Polynomial:
    """(Y.f)(X) = f(XY), in the ambient (Y, X)."""
    X = op.matrix if op else matrix_variables(Y.n)
    R = ring(Y, _extra(f, X) or X)
    return substitute_matrix(f.over(R), X, mat_mul(matrix_of(X, R), matrix_of(Y, R)), R)


def _extra(f: Polynomial, X: VariableSet):
    # keep any non-matrix variables of f after X
    if set(f.variables) <= set(X.names):
        return None
    return tuple(X.names) + tuple(v for v in f.variables if v not in X.names)


@dataclass
class FirstRuleReport:
    passed: bool
    residuals: dict[str, Polynomial] = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def first_rule_check(op: OmegaOperator, f: Polynomial, powers=(1, 2), tag: str = "y") -> FirstRuleReport:
    """Check Omega^r(f.Y) = det(Y)^r Omega^r(f).Y and Omega^r(Y.f) = det(Y)^r Y.Omega^r(f)
    with a fully symbolic Y, as exact polynomial identities."""
    Y = generic_matrix(op.n, tag)
    residuals = {}
    detY = None
    for r in powers:
        fr = omega_power(op, f, r)
        for side, translate in (("right", right_translate), ("left", left_translate)):
            lhs = omega_power(op, translate(f, Y, op), r)
            rhs_base = translate(fr, Y, op)
            if detY is None or detY.variables != rhs_base.variables:
                detY = determinant(matrix_of(Y, rhs_base.variables))
            rhs = rhs_base * detY ** r
            if lhs.variables != rhs.variables:
                lhs = lhs.over(rhs.variables)
            res = lhs - rhs
            if res:
                residuals[f"{side}, r={r}"] = res
    return FirstRuleReport(not residuals, residuals)


# ---------------------------------------------------------------------------
# (B x B^-)-semi-invariants


def lower_right_minor(op: OmegaOperator, i: int, variables=None) -> Polynomial:
    """f_i: the determinant of the lower-right i x i block of the generic matrix."""
    n = op.n
    if not 1 <= i <= n:
        raise ValueError("minor size out of range")
    X = matrix_of(op.matrix, variables)
    block = tuple(tuple(X[r][c] for c in range(n - i, n)) for r in range(n - i, n))
    return determinant(block)


@dataclass
class SemiInvariantWitness:
    """f with f(U X L) = mu(U) mu(L) f(X) for upper-triangular U and lower-triangular L."""

    f: Polynomial
    mu: tuple
    sides: tuple = ("upper-left", "lower-right")


def _triangular(n: int, tag: str, upper: bool, variables) -> tuple:
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j:
                row.append(Polynomial.var(variables, f"{tag}d{i}"))
            elif (j > i) == upper:
                row.append(Polynomial.var(variables, f"{tag}{i}{j}"))
            else:
                row.append(Polynomial.zero(variables))
        rows.append(tuple(row))
    return tuple(rows)


def _triangular_names(n: int, tag: str, upper: bool) -> list[str]:
    names = [f"{tag}d{i}" for i in range(1, n + 1)]
    names += [f"{tag}{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i != j and (j > i) == upper]
    return names


def verify_witness(op: OmegaOperator, w: SemiInvariantWitness) -> bool:
    """Exact check of f(UXL) == mu(diag U) mu(diag L) f(X), symbolic U, L."""
    n = op.n
    if len(w.mu) != n:
        raise ValueError("weight length must equal n")
    if not w.f:
        return True
    if any(m < 0 for m in w.mu):
        return False
    aux = auxiliary_variables("tri", _triangular_names(n, "u", True) + _triangular_names(n, "l", False))
    R = ring(aux, op.matrix)
    U = _triangular(n, "u", True, R)
    L = _triangular(n, "l", False, R)
    M = mat_mul(mat_mul(U, matrix_of(op.matrix, R)), L)
    lhs = substitute_matrix(w.f.over(R), op.matrix, M, R)
    # mu is read on the reversed diagonal
    factor = Polynomial.constant(R, 1)
    for i, m in enumerate(w.mu):
        k = n - i
        factor = factor * (Polynomial.var(R, f"ud{k}") * Polynomial.var(R, f"ld{k}")) ** m
    return lhs == factor * w.f.over(R)


def classical_witness(op: OmegaOperator, exponents, r: int) -> SemiInvariantWitness:
    """f_1^{r_1} ... f_{n-1}^{r_{n-1}} det^r with weight sum r_i omega_i + r det."""
    exponents = tuple(exponents)
    if len(exponents) != op.n - 1 or any(e < 0 for e in exponents) or r < 0:
        raise ValueError("need n-1 nonnegative minor exponents and r >= 0")
    f = op.lam ** r
    mu = [r] * op.n
    for i, e in enumerate(exponents, start=1):
        if e:
            f = f * lower_right_minor(op, i) ** e
        for k in range(i):
            mu[k] += e
    return SemiInvariantWitness(f, tuple(mu))


def omega_on_semiinvariant(
    op: OmegaOperator, w: SemiInvariantWitness, cone: wl.RationalCone | None = None, check_input: bool = True
) -> SemiInvariantWitness | None:
    """Omega(f) as a witness of weight mu - det, or None when Omega(f) = 0.

    Raises IdentityFailure when the weight bookkeeping is violated: a nonzero
    image at a non-polynomial weight, or a nonzero image that is not an
    eigenvector of weight mu - det.
    """
    if check_input and not verify_witness(op, w):
        raise ValueError("input is not a (B x B^-)-semi-invariant of the stated weight")
    g = op(w.f)
    target = wl.sub(w.mu, wl.determinant_weight(op.n))
    if not g:
        return None
    if not wl.is_polynomial_dominant(target, cone):
        raise IdentityFailure(f"Omega(f) != 0 although {target} is not a polynomial dominant weight", g)
    out = SemiInvariantWitness(g, target)
    if not verify_witness(op, out):
        raise IdentityFailure(f"Omega(f) is not a semi-invariant of weight {target}", g)
    return out


def a_omega_classical(op: OmegaOperator, exponents, r: int) -> Fraction:
    """a_omega with Omega(f) = a_omega f / det for f = prod f_i^{r_i} det^r, r >= 1."""
    if r < 1:
        raise ValueError("need r >= 1")
    w = classical_witness(op, exponents, r)
    image = op(w.f)
    a = evaluate_at_identity(image, op.n)
    expected = classical_witness(op, exponents, r - 1).f.scale(a)
    if image != expected:
        raise IdentityFailure("Omega(f) is not a multiple of f/det", image - expected)
    return a
