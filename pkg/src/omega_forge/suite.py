"""Seeded property suite: first rule, Cayley constants, second rule, integral,
Reynolds, comodule axioms and the weight-side bridge.

Every check is an exact identity; a failure carries the residual polynomial.
Output is a pure function of (n, seed, max_degree, fault).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import invariantize as inv
from . import reps
from . import weightlattice as wl
from .linalg import EchelonBasis, mat_vec
from .omega import (
    IdentityFailure,
    OmegaOperator,
    a_omega_classical,
    cayley_constants,
    classical_witness,
    first_rule_check,
    generic_matrix,
    omega_apply,
    omega_on_semiinvariant,
    omega_power,
    right_translate,
)
from .polycore import Polynomial, to_text

FAULTS = ("first-rule",)


class FaultyOmega(OmegaOperator):
    """Omega plus d/dx11: breaks equivariance, used as a negative control."""

    def __call__(self, f: Polynomial) -> Polynomial:
        return omega_apply(self, f) + f.derivative(self.matrix.name(1, 1))


@dataclass
class PropertyResult:
    name: str
    passed: bool = True
    checked: int = 0
    detail: str = ""

    def fail(self, detail: str):
        if self.passed:
            self.passed = False
            self.detail = detail

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "detail": self.detail}


@dataclass
class VerifyReport:
    n: int
    seed: int
    max_degree: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "max_degree": self.max_degree,
            "passed": self.passed,
            "properties": [r.to_json() for r in self.results],
        }


# ---------------------------------------------------------------------------
# sampling


def random_polynomial(rng: random.Random, variables, max_degree: int, max_terms: int = 4, bound: int = 5) -> Polynomial:
    """At most ``max_terms`` terms of degree <= max_degree (the first of degree exactly max_degree), small integer coefficients."""
    variables = tuple(variables)
    terms: dict = {}
    for t in range(rng.randint(1, max_terms)):
        e = [0] * len(variables)
        # the first term has full degree, so every sample reaches max_degree
        for _ in range(max_degree if t == 0 else rng.randint(0, max_degree)):
            e[rng.randrange(len(variables))] += 1
        c = rng.choice([k for k in range(-bound, bound + 1) if k])
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return Polynomial(variables, terms)


def random_vector(rng: random.Random, dim: int, bound: int = 5) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(dim))


def sample_count(n: int) -> int:
    return 50 if n == 2 else 20


def default_max_degree(n: int) -> int:
    return 4 if n == 2 else 3


# ---------------------------------------------------------------------------
# module zoo


def module_zoo(n: int, max_degree: int | None = None) -> list[reps.PolynomialComodule]:
    """Polynomial modules used across the suite.

    n = 2: trivial, k_det, forms(d) for d <= 4, their duals, and S^e of both for e <= 3.
    n >= 3: trivial, k_det, the standard module, its dual and S^e of the dual, e <= max_degree.
    """
    max_degree = default_max_degree(n) if max_degree is None else max_degree
    zoo = [reps.trivial_module(n), reps.character_module(n, 1)]
    if n == 2:
        for d in range(1, 5):
            F = reps.binary_forms_module(d)
            D = reps.dual_action_module(F)
            zoo += [F, D]
            for e in range(2, min(3, max_degree) + 1):
                zoo += [reps.symmetric_power(F, e), reps.symmetric_power(D, e)]
    else:
        F = reps.standard_module(n)
        D = reps.dual_action_module(F)
        zoo += [F, D]
        zoo += [reps.symmetric_power(D, e) for e in range(2, min(3, max_degree) + 1)]
    return zoo


def tensor_pairs(n: int) -> list[tuple]:
    """Five (V, W) pairs mixing polynomial and rational modules."""
    if n == 2:
        F1, F2 = reps.binary_forms_module(1), reps.binary_forms_module(2)
    else:
        F1 = reps.standard_module(n)
        F2 = reps.symmetric_power(F1, 2)
    K = reps.character_module(n, 1)
    return [
        (F1, F2),
        (reps.contragredient(F1), F1),
        (reps.contragredient(F1), reps.contragredient(F2)),
        (reps.twist(K, -2), F2),
        (reps.twist(F2, 1), reps.contragredient(F2)),
    ]


def weight_of(V) -> int | None:
    """det-weight q/n of semi-invariants of a homogeneous module, None if not integral."""
    degrees = V.entry_degrees()
    if len(degrees) != 1:
        return None
    (q,) = degrees
    return q // V.n if q % V.n == 0 else None


def rs_pairs(V) -> list[tuple[int, int]]:
    """(r, s) choices: the matching weight with s = 0, 1, and one mismatched weight."""
    w = weight_of(V)
    if w is None:
        return [(1, 1), (2, 1)]
    pairs = [(w + s, s) for s in (0, 1) if w + s >= 1]
    pairs.append((w + 1, 0))
    return pairs


# ---------------------------------------------------------------------------
# properties


def check_first_rule(n: int, rng: random.Random, max_degree: int, count: int, op: OmegaOperator | None = None) -> PropertyResult:
    op = op or OmegaOperator(n)
    res = PropertyResult("first-rule")
    for k in range(count):
        f = random_polynomial(rng, op.matrix.names, max_degree)
        report = first_rule_check(op, f)
        res.checked += 1
        if not report.passed:
            side, residual = next(iter(report.residuals.items()))
            res.fail(f"sample {k}: f = {to_text(f)}; {side}: residual {to_text(residual)}")
            break
    return res


def check_cayley(n: int) -> PropertyResult:
    res = PropertyResult("cayley-constants")
    s_max = 6 if n == 2 else 3
    op = OmegaOperator(n)
    try:
        cc = cayley_constants(op, s_max)
    except IdentityFailure as exc:
        res.fail(str(exc))
        return res
    res.checked = len(cc.alphas) + len(cc.alphas_rs)
    if not cc.is_proper():
        res.fail("some alpha_s vanishes")
    prod = Fraction(1)
    for s in range(1, s_max + 1):
        prod *= cc.alphas[s]
        if cc.cs[s] != prod:
            res.fail(f"c_{s} != product of alphas")
    # c_2 independently: iterate Omega on det^2
    c2 = omega_power(op, op.lam ** 2, 2)
    if not (c2.is_constant() and c2.constant_term() == cc.cs[2]):
        res.fail(f"Omega^2(det^2) = {to_text(c2)} but c_2 = {cc.cs[2]}")
    res.checked += 1
    return res


def _oracle_span(V, k: int, cache: dict) -> EchelonBasis:
    key = (id(V), k)
    if key not in cache:
        eb = EchelonBasis(V.dim)
        if k >= 0:
            for v in reps.semi_invariant_oracle(V, k):
                eb.add(v)
        cache[key] = eb
    return cache[key]


def check_second_rule(zoo, rng: random.Random, samples: int = 2) -> PropertyResult:
    res = PropertyResult("second-rule")
    cache: dict = {}
    for V in zoo:
        for r, s in rs_pairs(V):
            M = inv.I_rs_matrix(V, r, s)
            for _ in range(samples):
                v = random_vector(rng, V.dim)
                w = mat_vec(M, v)
                res.checked += 1
                residual = inv.second_rule_residual(V, w, r, s)
                if residual is not None:
                    res.fail(f"{V.name}, r={r}, s={s}: residual {to_text(residual)}")
                    return res
                if not _oracle_span(V, r - s, cache).contains(w):
                    res.fail(f"{V.name}, r={r}, s={s}: output outside the oracle semi-invariant space")
                    return res
                residual = inv.intertwining_residual(V, M, v)
                if residual is not None:
                    res.fail(f"{V.name}, r={r}, s={s}: commuting square residual {to_text(residual)}")
                    return res
    return res


def check_integral(n: int, rng: random.Random, max_degree: int, count: int = 30) -> PropertyResult:
    res = PropertyResult("integral")
    op = OmegaOperator(n)
    one = Polynomial.constant(op.matrix.names, 1)
    if inv.integral_J(op, one) != 1:
        res.fail("J(1) != 1")
        return res
    Y = generic_matrix(n, "y")
    for k in range(count):
        f = random_polynomial(rng, op.matrix.names, max_degree)
        J = inv.integral_J(op, f)
        target = Polynomial.constant(op.matrix.names, J)
        left, right = inv.sweedler_integral_sides(op, f)
        res.checked += 1
        if left != target or right != target:
            res.fail(f"sample {k}: f = {to_text(f)}; J(f) = {J}, sides {to_text(left)} / {to_text(right)}")
            return res
        if k < 5:
            # J(f.Y) = J(f) as an identity in Y
            shifted = inv.integral_over(op, right_translate(f, Y, op))
            if shifted != Polynomial.constant(shifted.variables, J):
                res.fail(f"sample {k}: J(f.Y) = {to_text(shifted)} differs from J(f) = {J}")
                return res
    return res


def reynolds_targets(zoo) -> list:
    """Each polynomial module, plus its det^(-w) twist when its semi-invariants have integral weight w > 0."""
    out = []
    for V in zoo:
        out.append(V)
        w = weight_of(V)
        if w:
            out.append(reps.twist(V, -w))
    return out


def check_reynolds(zoo, rng: random.Random) -> PropertyResult:
    res = PropertyResult("reynolds")
    for V in reynolds_targets(zoo):
        R = inv.reynolds_matrix(V)
        invariants = inv.invariant_space(V)
        eb = EchelonBasis(V.dim)
        for u in invariants:
            eb.add(u)
        R2 = tuple(tuple(sum((R[i][k] * R[k][j] for k in range(V.dim)), Fraction(0)) for j in range(V.dim)) for i in range(V.dim))
        res.checked += 1
        label = f"{V.name} (det^-{V.den})" if isinstance(V, reps.RationalRep) else V.name
        if R2 != R:
            res.fail(f"{label}: R^2 != R")
            return res
        for u in invariants:
            if mat_vec(R, u) != tuple(u):
                res.fail(f"{label}: R does not fix an oracle invariant")
                return res
        for _ in range(2):
            if not eb.contains(mat_vec(R, random_vector(rng, V.dim))):
                res.fail(f"{label}: R(v) outside the oracle invariant space")
                return res
        # rank of R equals the invariant dimension
        rank = EchelonBasis(V.dim)
        for row in R:
            rank.add(row)
        if rank.rank != len(invariants):
            res.fail(f"{label}: rank R = {rank.rank}, oracle invariants {len(invariants)}")
            return res
    return res


def check_comodules(zoo, n: int) -> PropertyResult:
    res = PropertyResult("comodule")
    for V in zoo + [reps.contragredient(reps.standard_module(n) if n > 2 else reps.binary_forms_module(2))]:
        report = reps.check_comodule(V)
        res.checked += 1
        if not report.passed:
            res.fail(f"{V.name}: {report}")
            return res
    for V, W in tensor_pairs(n):
        T = reps.tensor(V, W)
        nv, nw, nt = (reps.minimal_twist_exponent(x) for x in (V, W, T))
        res.checked += 1
        if nt != nv + nw:
            res.fail(f"n({T.name}) = {nt} but n_V + n_W = {nv} + {nw}")
            return res
        report = reps.check_comodule(T)
        if not report.passed:
            res.fail(f"{T.name}: {report}")
            return res
    return res


def check_weight_bridge(n: int, box: int | None = None) -> PropertyResult:
    res = PropertyResult("weight-bridge")
    box = (4 if n == 2 else 2) if box is None else box
    op = OmegaOperator(n)
    cone = wl.matrix_monoid_cone(n)
    S = wl.polynomial_dominant_weights(cone, n, box)
    expected = [w for w in wl.box_weights(n, box) if all(w[i] >= w[i + 1] for i in range(n - 1)) and w[-1] >= 0]
    res.checked += 1
    if sorted(S) != sorted(expected):
        res.fail("polynomial dominant weights differ from the chamber lambda_1 >= ... >= lambda_n >= 0")
        return res
    for report in (wl.saturation_check(S, box), wl.ideal_check(S, box)):
        res.checked += 1
        if not report.passed:
            res.fail(f"{report.name}: {report.violations[:3]}")
            return res
    lam = wl.determinant_weight(n)
    family = wl.omega_coefficient_family(lam, S, cone)
    for mu, status in sorted(family.entries.items()):
        # mu = sum r_i omega_i + r det, omega_i = (1^i, 0^(n-i))
        exps = [mu[i - 1] - mu[i] for i in range(1, n)]
        r = mu[-1]
        if sum(exps) + r > box:
            continue
        res.checked += 1
        if status == "free":
            if a_omega_classical(op, exps, r) == 0:
                res.fail(f"free weight {mu} has vanishing a_omega")
                return res
        else:
            w = classical_witness(op, exps, r)
            if omega_on_semiinvariant(op, w, cone) is not None:
                res.fail(f"Omega does not annihilate the semi-invariant of weight {mu}")
                return res
    return res


# ---------------------------------------------------------------------------


def run_verify(n: int = 2, seed: int = 7, max_degree: int | None = None, fault: str | None = None,
               log: Callable[[str], None] | None = None) -> VerifyReport:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    max_degree = default_max_degree(n) if max_degree is None else max_degree
    rng = random.Random(seed)
    report = VerifyReport(n, seed, max_degree)
    op = FaultyOmega(n) if fault == "first-rule" else OmegaOperator(n)
    zoo = module_zoo(n, max_degree)
    steps = [
        lambda: check_first_rule(n, rng, max_degree, sample_count(n), op),
        lambda: check_cayley(n),
        lambda: check_second_rule(zoo, rng),
        lambda: check_integral(n, rng, max_degree),
        lambda: check_reynolds(zoo, rng),
        lambda: check_comodules(zoo, n),
        lambda: check_weight_bridge(n),
    ]
    for step in steps:
        result = step()
        report.results.append(result)
        if log:
            log(f"{result.name}: {'pass' if result.passed else 'FAIL'} ({result.checked} checks)")
    return report
