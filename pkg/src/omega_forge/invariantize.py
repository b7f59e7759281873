"""Second-rule operators, the integral, Reynolds operators and a degree-bounded
Hilbert generator search, all built from the classical Omega-process.

``I_{r,s}(v)_j = nu(Omega^r(det^s * sum_i C[j][i] v_i))``: for a polynomial
module the output is a semi-invariant of weight det^(r-s), and on such
semi-invariants ``I_{r,s}`` acts as multiplication by ``c_r = Omega^r(det^r)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import reps
from .linalg import EchelonBasis, mat_vec
from .omega import IdentityFailure, OmegaOperator, cayley_constants, nu_omega_power, omega_apply
from .polycore import Polynomial, comultiply, matrix_variables, to_text

__all__ = [
    "DegreeRecord",
    "InvariantReport",
    "I_rs",
    "I_rs_matrix",
    "LiftedProblem",
    "NonIntegralWeight",
    "SL2Problem",
    "hilbert_generators",
    "integral_J",
    "integral_over",
    "reynolds",
    "reynolds_matrix",
    "semisimple_lift",
]


@lru_cache(maxsize=None)
def _op(n: int, tag: str = "x") -> OmegaOperator:
    return OmegaOperator(n, tag)


@lru_cache(maxsize=None)
def _c(n: int, r: int) -> Fraction:
    """c_r = alpha_r ... alpha_1 for the classical process on M_n."""
    if r == 0:
        return Fraction(1)
    return cayley_constants(_op(n), r).cs[r]


def _nu_omega(op: OmegaOperator, g: Polynomial, r: int, method: str) -> Fraction:
    if method == "pairing":
        return nu_omega_power(op, g, r).constant_term()
    if method == "direct":
        for _ in range(r):
            g = omega_apply(op, g)
        return g.constant_term()
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# I_{r,s}


def I_rs_matrix(V: reps.PolynomialComodule, r: int, s: int, method: str = "pairing") -> tuple[tuple[Fraction, ...], ...]:
    """The matrix of I_{r,s} on the basis of V (entry [j][i] = nu(Omega^r(det^s C[j][i])))."""
    if r < 1 or s < 0:
        raise ValueError("need r >= 1 and s >= 0")
    if not isinstance(V, reps.PolynomialComodule):
        raise TypeError("I_{r,s} needs a polynomial module")
    op = _op(V.n)
    ds = op.lam ** s
    out = []
    for row in V.C:
        new = []
        for e in row:
            if not e:
                new.append(Fraction(0))
                continue
            g = e * ds if s else e
            new.append(_nu_omega(op, g, r, method))
        out.append(tuple(new))
    return tuple(out)


def I_rs(V: reps.PolynomialComodule, v: Sequence, r: int, s: int, method: str = "pairing") -> tuple[Fraction, ...]:
    return mat_vec(I_rs_matrix(V, r, s, method), v)


def second_rule_residual(V: reps.PolynomialComodule, w: Sequence, r: int, s: int) -> Polynomial | None:
    """det^s C(X) w - det^r w for w = I_{r,s}(v); None when the identity holds."""
    op = _op(V.n)
    ds, dr = op.lam ** s, op.lam ** r
    for j, p in enumerate(V.act(w)):
        res = p * ds - dr.scale(w[j])
        if res:
            return res
    return None


def intertwining_residual(V: reps.PolynomialComodule, M, v: Sequence) -> Polynomial | None:
    """C(X) M v - M C(X) v: I_{r,s} as a morphism for the det^s-twisted action."""
    Mv = mat_vec(M, v)
    left = V.act(Mv)
    Cv = V.act(v)
    for j in range(V.dim):
        right = Polynomial.zero(V.variables)
        for i in range(V.dim):
            if M[j][i] and Cv[i]:
                right = right + Cv[i].scale(M[j][i])
        res = left[j] - right
        if res:
            return res
    return None


# ---------------------------------------------------------------------------
# integral


def integral_over(op: OmegaOperator, f: Polynomial) -> Polynomial:
    """J applied in the operator's matrix variables, other variables as constants.

    J(f) = nu(Omega(f det)) / Omega(det); the result lives in f's ambient.
    """
    alpha1 = _c(op.n, 1)
    lam = op.lam.over(f.variables) if op.lam.variables != f.variables else op.lam
    g = omega_apply(op, f * lam)
    return g.set_zero(op.matrix.names).scale(1 / alpha1)


def integral_J(op: OmegaOperator, f: Polynomial) -> Fraction:
    """The two-sided normalized integral on k[M_n]."""
    if set(f.variables) - set(op.matrix.names):
        raise ValueError("f must lie in k[M_n]; use integral_over for extra variables")
    return integral_over(op, f.over(op.matrix.names)).constant_term()


def sweedler_integral_sides(op: OmegaOperator, f: Polynomial) -> tuple[Polynomial, Polynomial]:
    """(sum f_1 J(f_2), sum J(f_1) f_2), both returned in k[M_n]."""
    n = op.n
    X, Y, Z = op.matrix, matrix_variables(n, "y"), matrix_variables(n, "z")
    delta = comultiply(f.over(X.names), n)
    left = integral_over(_op(n, "z"), delta)  # J on the second tensorand
    right = integral_over(_op(n, "y"), delta)
    left = left.rename(dict(zip(Y.names, X.names))).over(X.names)
    right = right.rename(dict(zip(Z.names, X.names))).over(X.names)
    return left, right


# ---------------------------------------------------------------------------
# Reynolds operators


def _reynolds_data(V) -> tuple[reps.PolynomialComodule, int]:
    """(polynomial module N, k) such that the invariants of V are the det^k semi-invariants of N."""
    if isinstance(V, reps.PolynomialComodule):
        return V, 0
    N = reps.PolynomialComodule(V.n, V.labels, V.N, V.twist + V.den, V.name)
    return N, V.den


def reynolds_matrix(V, s: int = 1, method: str = "pairing") -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of R_V = I_{k+s,s} / c_{k+s}; for polynomial V and s = 1 this is I_{1,1}/Omega(det)."""
    N, k = _reynolds_data(V)
    r = k + s
    c = _c(V.n, r)
    if c == 0:
        raise IdentityFailure(f"c_{r} = 0: the process is not proper")
    M = I_rs_matrix(N, r, s, method)
    return tuple(tuple(x / c for x in row) for row in M)


def reynolds(V, v: Sequence, s: int = 1, method: str = "pairing") -> tuple[Fraction, ...]:
    """Project v onto the invariants of V (M-invariants, or G-invariants for a rational V)."""
    return mat_vec(reynolds_matrix(V, s, method), v)


def invariant_space(V) -> list[tuple[Fraction, ...]]:
    """Invariants of V by the linear oracle (independent of Omega)."""
    N, k = _reynolds_data(V)
    return reps.semi_invariant_oracle(N, k)


# ---------------------------------------------------------------------------
# SL_2 problems lifted to GL_2


class NonIntegralWeight(ValueError):
    pass


@dataclass(frozen=True)
class SL2Problem:
    """Invariants of degree ``degree`` of SL_2 acting on binary forms of degree ``form_degree``."""

    form_degree: int
    degree: int


@dataclass
class LiftedProblem:
    problem: SL2Problem
    module: reps.PolynomialComodule  # S^degree of the coefficient-function module
    weight: int  # det exponent of the GL_2 semi-invariants to look for


def lifted_weight(V: reps.PolynomialComodule) -> int:
    """det-weight that SL_2 invariants of V must carry under GL_2, from the homogeneous degree of C."""
    degrees = V.entry_degrees()
    if len(degrees) != 1:
        raise ValueError("module is not homogeneous")
    (q,) = degrees
    k, rem = divmod(q, V.n)
    if rem:
        raise NonIntegralWeight(f"entries of degree {q} are not a det power on M_{V.n}: weight {q}/{V.n}")
    return k


def semisimple_lift(problem: SL2Problem, cap: int | None = None) -> LiftedProblem:
    """Read SL_2 x k* invariants as GL_2 semi-invariants of weight det^(d e / 2).

    GL_2 = (SL_2 x k*)/mu_2; an SL_2 invariant of degree e on S(V*) spans a line
    on which the center acts by t^{d e}, so it is a det^{d e/2} semi-invariant.
    The weight is read off the degree of the coefficient matrix, not assumed.
    """
    base = reps.dual_action_module(reps.binary_forms_module(problem.form_degree))
    S = reps.symmetric_power(base, problem.degree, cap=cap)
    return LiftedProblem(problem, S, lifted_weight(S))


# ---------------------------------------------------------------------------
# Hilbert generator search


@dataclass
class DegreeRecord:
    degree: int
    weight: int | None
    r: int | None = None
    s: int | None = None
    sweep_dim: int = 0
    oracle_dim: int = 0
    products_dim: int = 0
    agreement: bool = True
    new_generators: list[Polynomial] = field(default_factory=list)
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "weight": self.weight,
            "r": self.r,
            "s": self.s,
            "sweep_dim": self.sweep_dim,
            "oracle_dim": self.oracle_dim,
            "products_dim": self.products_dim,
            "agreement": self.agreement,
            "new_generators": [to_text(g) for g in self.new_generators],
            "notes": self.notes,
        }


@dataclass
class InvariantReport:
    module: dict
    degree_bound: int
    records: list[DegreeRecord] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def agreement(self) -> bool:
        return all(r.agreement for r in self.records)

    @property
    def generators(self) -> list[tuple[int, Polynomial]]:
        return [(r.degree, g) for r in self.records for g in r.new_generators]

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "degree_bound": self.degree_bound,
            "agreement": self.agreement,
            "degrees": [r.to_json() for r in self.records],
            "generators": [{"degree": d, "polynomial": to_text(g)} for d, g in self.generators],
        }


def binary_form_weight(form_degree: int) -> Callable[[int], int | None]:
    """Target det-weight per degree for SL_2 invariants of binary forms (None if d e is odd)."""

    def weight(e: int) -> int | None:
        q, rem = divmod(form_degree * e, 2)
        return None if rem else q

    return weight


def _products_of(generators: list[tuple[int, Polynomial]], degree: int) -> list[Polynomial]:
    """All products of earlier generators with total degree ``degree``."""
    out = []
    gens = [(d, g) for d, g in generators if d <= degree]

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(acc)
            return
        for idx in range(start, len(gens)):
            d, g = gens[idx]
            if d <= remaining:
                rec(idx, remaining - d, g if acc is None else acc * g)

    rec(0, degree, None)
    return out


def hilbert_generators(
    V: reps.PolynomialComodule,
    target_weight: Callable[[int], int | None] | dict,
    degree_bound: int,
    s: int | None = None,
    cap: int | None = None,
    method: str = "pairing",
) -> InvariantReport:
    """Degree-by-degree generators of the ring of semi-invariants of S(V).

    For each degree e <= degree_bound: build S^e(V), sweep I_{r,s} over its
    monomial basis with r - s equal to the target weight, compare the span
    with the linear oracle, and keep the oracle-basis elements that are not
    already products of earlier generators.  Disagreements are recorded,
    never raised.
    """
    t0 = time.perf_counter()
    weight_of = target_weight.get if isinstance(target_weight, dict) else target_weight
    report = InvariantReport(reps.to_descriptor(V), degree_bound)
    generators: list[tuple[int, Polynomial]] = []
    for e in range(1, degree_bound + 1):
        w = weight_of(e)
        rec = DegreeRecord(e, w)
        report.records.append(rec)
        if w is None:
            rec.notes = "non-integral weight: no invariants in this degree"
            continue
        S = reps.symmetric_power(V, e, cap=cap)
        # the invariants of the rational structure det^-w chi_e are the
        # det^w semi-invariants of chi_e; its minimal polynomial twist is the
        # proof's n e, used as s, and r = s + w
        if s is None:
            s_e = reps.minimal_twist_exponent(reps.twist(S, -w))
        else:
            s_e = s
        r = s_e + w
        rec.r, rec.s = r, s_e
        oracle = reps.semi_invariant_oracle(S, w)
        rec.oracle_dim = len(oracle)
        if r < 1:
            # I_{r,s} needs r >= 1; only the trivial weight-0, s=0 case lands here
            rec.notes = "r = 0: sweep skipped, oracle used directly"
            sweep = list(oracle)
        else:
            c = _c(V.n, r)
            if c == 0:
                rec.agreement = False
                rec.notes = f"c_{r} = 0"
                continue
            M = I_rs_matrix(S, r, s_e, method)
            # columns of M / c_r are the images of the basis vectors
            sweep = [tuple(M[j][i] / c for j in range(S.dim)) for i in range(S.dim)]
        sweep_basis = EchelonBasis(S.dim)
        for col in sweep:
            sweep_basis.add(col)
        oracle_basis = EchelonBasis(S.dim)
        for v in oracle:
            oracle_basis.add(v)
        rec.sweep_dim = sweep_basis.rank
        same = sweep_basis.rank == oracle_basis.rank and all(oracle_basis.contains(v) for v in sweep_basis.rref())
        if not same:
            rec.agreement = False
            rec.notes = "I_{r,s} sweep and oracle spans differ"
        # reduction by products of lower-degree generators
        span = EchelonBasis(S.dim)
        for p in _products_of(generators, e):
            span.add(reps.polynomial_to_vector(S, p))
        rec.products_dim = span.rank
        # candidates come from the sweep (the Omega pipeline); the oracle only checks
        for v in sweep_basis.rref():
            if span.add(v):
                g = reps.vector_to_polynomial(S, v).primitive()
                rec.new_generators.append(g)
                generators.append((e, g))
        if span.rank != oracle_basis.rank or not all(oracle_basis.contains(v) for v in span.rref()):
            rec.agreement = False
            rec.notes = "products of generators do not span the oracle space"
        for g in rec.new_generators:
            if not reps.is_semi_invariant(S, reps.polynomial_to_vector(S, g), w):
                rec.agreement = False
                rec.notes = "emitted generator fails the semi-invariance identity"
    report.seconds = time.perf_counter() - t0
    return report
