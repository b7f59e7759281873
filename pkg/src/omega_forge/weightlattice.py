"""Weights of GL_n, dominance, rational polyhedral cones, and the Omega coefficient family.

Weights are integer tuples of length n in the coordinates where the
fundamental weights are ``omega_i = (1,...,1,0,...,0)`` (i ones) and the simple
roots are ``e_i - e_{i+1}``; the determinant is ``(1,...,1)``.  A weight
``mu`` is read on the diagonal torus with the diagonal reversed,
``mu(diag(t_1..t_n)) = prod t_{n+1-i}^{mu_i}``, which makes the lower-right
minors of the generic matrix the highest weight vectors (f_i has weight omega_i).

Cones are finitely generated and handled with exact rationals.  Dualization
enumerates candidate extreme rays from subsets of generators, which is the
double-description idea without incremental bookkeeping; adequate for the
dimensions (<= 4) used here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import EchelonBasis, nullspace, rank

Weight = tuple  # tuple[int, ...]


# ---------------------------------------------------------------------------
# lattice basics


def simple_roots(n: int) -> list[Weight]:
    return [tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n)) for i in range(n - 1)]


def fundamental_weights(n: int) -> list[Weight]:
    return [tuple(1 if k < i else 0 for k in range(n)) for i in range(1, n)]


def determinant_weight(n: int, k: int = 1) -> Weight:
    return (k,) * n


def _check_len(a, b):
    if len(a) != len(b):
        raise ValueError(f"weight length mismatch: {len(a)} vs {len(b)}")


def sub(a: Weight, b: Weight) -> Weight:
    _check_len(a, b)
    return tuple(x - y for x, y in zip(a, b))


def add(a: Weight, b: Weight) -> Weight:
    _check_len(a, b)
    return tuple(x + y for x, y in zip(a, b))


def is_dominant(w: Weight) -> bool:
    return all(w[i] >= w[i + 1] for i in range(len(w) - 1))


def dominance_leq(lam: Weight, mu: Weight) -> bool:
    """lam <= mu iff mu - lam is a nonnegative integer sum of simple roots."""
    d = sub(mu, lam)
    if sum(d) != 0:
        return False
    partial = 0
    for x in d[:-1]:
        partial += x
        if partial < 0:
            return False
    return True


def box_weights(n: int, box) -> Iterable[Weight]:
    """All integer vectors in the box; ``box`` is an int b (coords in [-b, b]) or per-coordinate (lo, hi)."""
    if isinstance(box, int):
        ranges = [range(-box, box + 1)] * n
    else:
        ranges = [range(lo, hi + 1) for lo, hi in box]
    return itertools.product(*ranges)


# ---------------------------------------------------------------------------
# cones


def _vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _primitive(v) -> tuple:
    """Scale a rational vector to coprime integers, keeping its direction."""
    import math

    den = math.lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = math.gcd(*ints)
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in v)


@dataclass(frozen=True)
class RationalCone:
    """The cone of nonnegative combinations of ``generators`` in Q^dim."""

    dim: int
    generators: tuple[tuple[Fraction, ...], ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, generators: Iterable[Sequence], dim: int | None = None) -> "RationalCone":
        gens = [_vec(g) for g in generators]
        if dim is None:
            if not gens:
                raise ValueError("dimension needed for a cone without generators")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ValueError("generator length mismatch")
        gens = [_primitive(g) for g in gens if any(g)]
        return cls(dim, tuple(dict.fromkeys(gens)))


def orthant(n: int) -> RationalCone:
    return RationalCone.of([tuple(int(i == j) for j in range(n)) for i in range(n)], n)


def matrix_monoid_cone(n: int) -> RationalCone:
    """Cone of the torus closure of diagonal matrices in M_n: one-parameter
    subgroups diag(t^a_1, ..., t^a_n) with a limit at t = 0, i.e. a >= 0."""
    return orthant(n)


def dual_cone(C: RationalCone) -> RationalCone:
    """{y : <g, y> >= 0 for every generator g}, returned by generators."""
    d = C.dim
    gens = list(C.generators)
    out: list[tuple] = []
    # lineality space of the dual: the orthogonal complement of span(gens)
    lineal = nullspace(gens, d) if gens else [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    for v in lineal:
        out.append(_primitive(v))
        out.append(_primitive(tuple(-x for x in v)))
    if gens:
        r = rank(gens, d)
        # extreme rays of the pointed part live in span(gens); each is cut out
        # by r-1 independent active generators
        span_basis = EchelonBasis(d)
        for g in gens:
            span_basis.add(g)
        span_rows = span_basis.rref()
        for subset in itertools.combinations(gens, r - 1):
            # y in span(gens), <g, y> = 0 for g in subset: solve in span coords
            system = [tuple(_dot(g, b) for b in span_rows) for g in subset]
            sol = nullspace(system, r) if system else [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
            if len(sol) != 1:
                continue
            y = tuple(sum((c * b[k] for c, b in zip(sol[0], span_rows)), Fraction(0)) for k in range(d))
            for cand in (y, tuple(-x for x in y)):
                if all(_dot(g, cand) >= 0 for g in gens):
                    out.append(_primitive(cand))
    return RationalCone.of(out, d)


def cone_member(C: RationalCone, v: Sequence) -> bool:
    """Exact membership via the dual description (Farkas)."""
    v = _vec(v)
    if len(v) != C.dim:
        raise ValueError("vector length mismatch")
    return all(_dot(h, v) >= 0 for h in dual_cone(C).generators)


def is_strictly_convex(C: RationalCone) -> bool:
    """True iff C contains no line, i.e. its dual is full-dimensional."""
    D = dual_cone(C)
    return rank(list(D.generators), C.dim) == C.dim


def in_dual(C: RationalCone, v: Sequence) -> bool:
    """v in C^dual, by pairing against the generators of C directly."""
    v = _vec(v)
    return all(_dot(g, v) >= 0 for g in C.generators)


# ---------------------------------------------------------------------------
# polynomial dominant weights


def is_polynomial_dominant(mu: Weight, cone: RationalCone | None = None) -> bool:
    """mu in C^dual intersected with the dominant weights."""
    if cone is None:
        cone = matrix_monoid_cone(len(mu))
    return is_dominant(mu) and in_dual(cone, mu)


def polynomial_dominant_weights(monoid_cone: RationalCone, n: int, box) -> list[Weight]:
    """Dominant weights in the box that lie in the dual of the monoid cone."""
    if monoid_cone.dim != n:
        raise ValueError("cone dimension must equal n")
    D = dual_cone(monoid_cone)
    facets = dual_cone(D)  # membership in D is tested against D's dual
    return [w for w in box_weights(n, box) if is_dominant(w) and in_dual(facets, w)]


@dataclass
class CheckReport:
    name: str
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "violations": [[list(w) for w in v] for v in self.violations],
        }


def saturation_check(S: Iterable[Weight], box, multiples: int = 4) -> CheckReport:
    """For every lambda in the box and 2 <= m <= multiples with m*lambda in the box:
    m*lambda in S must imply lambda in S.  Violations are (lambda, m*lambda)."""
    S = set(map(tuple, S))
    report = CheckReport("saturation")
    if not S:
        return report
    n = len(next(iter(S)))
    points = list(box_weights(n, box))
    inside = set(points)
    for lam in points:
        for m in range(2, multiples + 1):
            ml = tuple(m * x for x in lam)
            if ml in inside and ml in S and lam not in S:
                report.violations.append((lam, ml))
    return report


def ideal_check(S: Iterable[Weight], box) -> CheckReport:
    """mu in S and lambda dominant (in the box) with lambda <= mu must give lambda in S.
    Violations are (mu, lambda)."""
    S = set(map(tuple, S))
    report = CheckReport("ideal")
    if not S:
        return report
    n = len(next(iter(S)))
    dominant = [w for w in box_weights(n, box) if is_dominant(w)]
    for mu in sorted(S):
        for lam in dominant:
            if lam != mu and dominance_leq(lam, mu) and lam not in S:
                report.violations.append((mu, lam))
    return report


# ---------------------------------------------------------------------------
# the a_mu family


@dataclass
class OmegaCoefficientFamily:
    lam: Weight
    entries: dict  # weight -> "free" | "forced-zero"

    def free(self) -> list[Weight]:
        return sorted(w for w, s in self.entries.items() if s == "free")

    def forced_zero(self) -> list[Weight]:
        return sorted(w for w, s in self.entries.items() if s == "forced-zero")

    def is_proper(self) -> bool:
        """a_{s*lambda} free for every multiple of lambda inside the truncation."""
        return all(self.entries[w] == "free" for w in self.entries if _positive_multiple(w, self.lam))

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "entries": [[list(w), s] for w, s in sorted(self.entries.items())],
        }


def _positive_multiple(w: Weight, lam: Weight) -> bool:
    if not any(lam):
        return False
    k = next(x for x in lam if x)
    s, r = divmod(w[lam.index(k)], k)
    return r == 0 and s >= 1 and w == tuple(s * x for x in lam)


def omega_coefficient_family(
    lam: Weight, poly_weights: Iterable[Weight], cone: RationalCone | None = None
) -> OmegaCoefficientFamily:
    """Mark a_mu forced-zero exactly when mu - lam is not a polynomial dominant weight."""
    lam = tuple(lam)
    weights = [tuple(w) for w in poly_weights]
    if lam not in weights:
        raise ValueError("lambda must be among the polynomial weights")
    if cone is None:
        cone = matrix_monoid_cone(len(lam))
    entries = {
        mu: ("free" if is_polynomial_dominant(sub(mu, lam), cone) else "forced-zero") for mu in weights
    }
    return OmegaCoefficientFamily(lam, entries)


# ---------------------------------------------------------------------------
# monoid cone attached to a character


class NotStrictlyConvex(ValueError):
    def __init__(self, certificate: "MonoidConeCertificate"):
        self.certificate = certificate
        super().__init__("cone contains a line")


@dataclass
class MonoidConeCertificate:
    cone: RationalCone
    strictly_convex: bool
    identity_holds: bool | None = None
    lineality: list = field(default_factory=list)


def cartan_matrix(n: int) -> list[list[int]]:
    """Cartan matrix of SL_n (type A_{n-1})."""
    l = n - 1
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(l)] for i in range(l)]


def positive_roots_fundamental(n: int) -> list[tuple[int, ...]]:
    """Positive roots alpha_i + ... + alpha_j in fundamental-weight coordinates."""
    A = cartan_matrix(n)
    l = n - 1
    roots = []
    for i in range(l):
        for j in range(i, l):
            roots.append(tuple(sum(A[k][c] for k in range(i, j + 1)) for c in range(l)))
    return roots


def certify_monoid_cone(generators: Iterable[Sequence], dim: int | None = None) -> MonoidConeCertificate:
    """Build a cone from explicit generators; raise NotStrictlyConvex if it contains a line."""
    C = RationalCone.of(generators, dim)
    ok = is_strictly_convex(C)
    cert = MonoidConeCertificate(C, ok)
    if not ok:
        cert.lineality = [g for g in C.generators if cone_member(C, tuple(-x for x in g))]
        raise NotStrictlyConvex(cert)
    return cert


def monoid_cone_from_character(n: int, lam: Weight) -> MonoidConeCertificate:
    """Cone generated by (-w, c) and the simple coroots, w = sum of fundamental weights.

    Coordinates are split as (semisimple part in the fundamental-weight basis of
    SL_n, central part).  A character of GL_n is ``det^c``, i.e. the constant
    weight (c, ..., c); its semisimple part vanishes.  Coroots are identified
    with roots through the pairing <omega_i, alpha_j^vee> = delta_ij.  Also
    checks (0, c) = (-w, c) + (half the sum of positive roots, 0).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    lam = tuple(lam)
    if len(lam) != n or len(set(lam)) != 1:
        raise ValueError("lambda must be a character weight (c, ..., c) of GL_n")
    c = Fraction(lam[0])
    l = n - 1
    w = tuple(Fraction(1) for _ in range(l))
    lead = tuple(-x for x in w) + (c,)
    coroots = [tuple(Fraction(x) for x in row) + (Fraction(0),) for row in cartan_matrix(n)]
    rho = [sum(Fraction(r[k]) for r in positive_roots_fundamental(n)) / 2 for k in range(l)]
    identity = tuple(a + b for a, b in zip(lead, tuple(rho) + (Fraction(0),))) == tuple(Fraction(0) for _ in range(l)) + (c,)
    C = RationalCone.of([lead] + coroots, l + 1)
    ok = is_strictly_convex(C)
    cert = MonoidConeCertificate(C, ok, identity)
    if not ok:
        cert.lineality = [g for g in C.generators if cone_member(C, tuple(-x for x in g))]
        raise NotStrictlyConvex(cert)
    return cert
