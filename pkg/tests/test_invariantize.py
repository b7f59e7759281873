import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from conftest import X2, polynomials, to_sympy
from omega_forge import invariantize as inv
from omega_forge import reps
from omega_forge.linalg import EchelonBasis, mat_vec
from omega_forge.omega import OmegaOperator, generic_matrix, right_translate
from omega_forge.polycore import Polynomial, parse
from omega_forge.suite import module_zoo, rs_pairs

op2 = OmegaOperator(2)


def dual_forms(d):
    return reps.dual_action_module(reps.binary_forms_module(d))


S2Q = reps.symmetric_power(dual_forms(2), 2)
DISC = parse("b^2 - 4*a*c", ("a", "b", "c"))


def test_I_rs_examples():
    assert inv.I_rs(reps.trivial_module(2), [1], 1, 1) == (2,)
    assert inv.I_rs(reps.character_module(2, 1), [1], 1, 1) == (0,)


def test_I_rs_on_quadratic_square():
    basis = reps.semi_invariant_oracle(S2Q, 2)
    rng = random.Random(3)
    for r, s in [(2, 0), (3, 1), (4, 2)]:
        M = inv.I_rs_matrix(S2Q, r, s)
        v = [Fraction(rng.randint(-5, 5)) for _ in range(6)]
        w = inv.I_rs(S2Q, v, r, s)
        eb = EchelonBasis(6)
        eb.add(basis[0])
        assert eb.contains(w)
        columns = [tuple(M[j][i] for j in range(6)) for i in range(6)]
        assert any(any(c) for c in columns)


def test_I_rs_scales_semi_invariants_by_c_r():
    disc = reps.polynomial_to_vector(S2Q, DISC)
    for r, s in [(2, 0), (3, 1)]:
        c = inv._c(2, r)
        assert inv.I_rs(S2Q, disc, r, s) == tuple(c * x for x in disc)


@pytest.mark.parametrize("r, s", [(1, 0), (2, 0), (2, 1), (3, 1)])
def test_pairing_equals_direct_iteration(r, s):
    for V in (S2Q, reps.binary_forms_module(2), reps.character_module(2, 1)):
        assert inv.I_rs_matrix(V, r, s, "pairing") == inv.I_rs_matrix(V, r, s, "direct")


def test_I_rs_rejects_bad_arguments():
    with pytest.raises(ValueError):
        inv.I_rs_matrix(S2Q, 0, 1)
    with pytest.raises(TypeError):
        inv.I_rs_matrix(reps.twist(S2Q, -1), 1, 1)


@pytest.mark.parametrize("V", module_zoo(2, 2) + module_zoo(3, 2), ids=lambda V: f"{V.name}-n{V.n}")
def test_second_rule_identities(V):
    rng = random.Random(11)
    for r, s in rs_pairs(V):
        M = inv.I_rs_matrix(V, r, s)
        v = [Fraction(rng.randint(-4, 4)) for _ in range(V.dim)]
        w = mat_vec(M, v)
        assert inv.second_rule_residual(V, w, r, s) is None
        assert inv.intertwining_residual(V, M, v) is None
        assert any(w) is False or reps.is_semi_invariant(V, w, r - s)


def test_integral_examples():
    one = Polynomial.constant(X2, 1)
    assert inv.integral_J(op2, one) == 1
    assert inv.integral_J(op2, op2.lam) == 0
    assert inv.integral_J(op2, parse("7 + x11*x22", X2)) == 7


@settings(max_examples=20)
@given(polynomials(X2, 4, 4))
def test_integral_is_two_sided(f):
    J = inv.integral_J(op2, f)
    left, right = inv.sweedler_integral_sides(op2, f)
    assert left == Polynomial.constant(X2, J) == right


@settings(max_examples=10)
@given(polynomials(X2, 3, 3))
def test_integral_is_translation_invariant(f):
    Y = generic_matrix(2, "y")
    shifted = inv.integral_over(op2, right_translate(f, Y, op2))
    assert shifted == Polynomial.constant(shifted.variables, inv.integral_J(op2, f))


def test_integral_rejects_foreign_variables():
    with pytest.raises(ValueError):
        inv.integral_J(op2, parse("a + x11", ("a",) + X2))


def test_reynolds_examples():
    assert inv.reynolds(reps.trivial_module(2), [Fraction(5)]) == (5,)
    assert inv.reynolds(reps.character_module(2, 1), [Fraction(5)]) == (0,)
    R = reps.twist(S2Q, -2)
    disc = reps.polynomial_to_vector(S2Q, DISC)
    out = inv.reynolds(R, [1, 2, 3, 4, 5, 6])
    # projection onto the discriminant line
    assert any(out)
    line = EchelonBasis(6)
    line.add(disc)
    assert line.contains(out)
    assert inv.reynolds(R, disc) == disc


def _check_reynolds(V):
    R = inv.reynolds_matrix(V)
    d = V.dim
    R2 = tuple(tuple(sum((R[i][k] * R[k][j] for k in range(d)), Fraction(0)) for j in range(d)) for i in range(d))
    assert R2 == R
    invariants = inv.invariant_space(V)
    eb = EchelonBasis(d)
    for u in invariants:
        eb.add(u)
        assert mat_vec(R, u) == tuple(u)
    for row_index in range(d):
        column = tuple(R[j][row_index] for j in range(d))
        assert eb.contains(column)


@pytest.mark.parametrize("V", module_zoo(2, 2), ids=lambda V: V.name)
def test_reynolds_properties(V):
    _check_reynolds(V)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_reynolds_on_rational_twists(k):
    _check_reynolds(reps.twist(S2Q, -k))
    _check_reynolds(reps.twist(reps.character_module(2, 1), -k))


def _symmetrization(Q, S):
    """Matrix of Q (x) Q -> S^2(Q), e_i (x) e_j -> e_i e_j."""
    index = {e: k for k, e in enumerate(S.exponents)}
    phi = [[Fraction(0)] * (Q.dim * Q.dim) for _ in range(S.dim)]
    for i in range(Q.dim):
        for j in range(Q.dim):
            e = [0] * Q.dim
            e[i] += 1
            e[j] += 1
            phi[index[tuple(e)]][i * Q.dim + j] = Fraction(1)
    return phi


def _mat_mul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))] for i in range(len(A))]


def test_reynolds_is_natural():
    Q = dual_forms(2)
    T = reps.tensor(Q, Q)
    phi = _symmetrization(Q, S2Q)
    # phi is a module map: C_S(X) phi = phi C_T(X)
    zero = Polynomial.zero(X2)
    for i in range(S2Q.dim):
        for j in range(T.dim):
            lhs = sum((S2Q.C[i][k].scale(phi[k][j]) for k in range(S2Q.dim) if phi[k][j]), zero)
            rhs = sum((T.C[k][j].scale(phi[i][k]) for k in range(T.dim) if phi[i][k]), zero)
            assert lhs == rhs
    RS = inv.reynolds_matrix(reps.twist(S2Q, -2))
    RT = inv.reynolds_matrix(reps.twist(T, -2))
    assert _mat_mul(RS, phi) == _mat_mul(phi, RT)
    assert any(any(row) for row in RT)


def test_hilbert_quadratic():
    report = inv.hilbert_generators(dual_forms(2), inv.binary_form_weight(2), 4)
    assert report.agreement
    gens = report.generators
    assert len(gens) == 1 and gens[0][0] == 2
    ratio = sympy.simplify(to_sympy(gens[0][1]) / to_sympy(DISC))
    assert ratio.is_number and ratio != 0
    assert [r.oracle_dim for r in report.records] == [0, 1, 0, 1]
    assert report.records[3].products_dim == 1 and not report.records[3].new_generators


def test_hilbert_quartic():
    report = inv.hilbert_generators(dual_forms(4), inv.binary_form_weight(4), 3)
    assert report.agreement
    assert [(r.degree, r.oracle_dim, r.sweep_dim) for r in report.records] == [(1, 0, 0), (2, 1, 1), (3, 1, 1)]
    gens = dict(report.generators)
    abc = ("a", "b", "c", "d", "e")
    I = parse("12*a*e - 3*b*d + c^2", abc)
    J = parse("72*a*c*e + 9*b*c*d - 27*a*d^2 - 27*e*b^2 - 2*c^3", abc)
    for got, want in ((gens[2], I), (gens[3], J)):
        ratio = sympy.simplify(to_sympy(got.over(abc)) / to_sympy(want))
        assert ratio.is_number and ratio != 0
    json.dumps(report.to_json())


def test_hilbert_linear_and_cubic():
    report = inv.hilbert_generators(dual_forms(1), inv.binary_form_weight(1), 3)
    assert report.agreement and not report.generators
    report = inv.hilbert_generators(dual_forms(3), inv.binary_form_weight(3), 4)
    assert report.agreement
    (degree, disc), = report.generators
    assert degree == 4
    a, b, c, d = sympy.symbols("a b c d")
    classical = b ** 2 * c ** 2 - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a ** 2 * d ** 2 + 18 * a * b * c * d
    assert sympy.simplify(to_sympy(disc) / classical).is_number


def test_hilbert_reports_disagreement(monkeypatch):
    # a sweep that loses everything must be reported, not raised
    monkeypatch.setattr(inv, "I_rs_matrix", lambda V, r, s, method="pairing": tuple((Fraction(0),) * V.dim for _ in range(V.dim)))
    report = inv.hilbert_generators(dual_forms(2), inv.binary_form_weight(2), 2)
    assert not report.agreement
    assert report.records[1].oracle_dim == 1 and report.records[1].sweep_dim == 0
    assert "differ" in report.records[1].notes or "span" in report.records[1].notes


def test_semisimple_lift():
    assert inv.semisimple_lift(inv.SL2Problem(2, 2)).weight == 2
    lifted = inv.semisimple_lift(inv.SL2Problem(4, 2))
    assert lifted.weight == 4 and reps.semi_invariant_oracle(lifted.module, 4)
    assert all(not reps.semi_invariant_oracle(lifted.module, k) for k in range(0, 8) if k != 4)
    with pytest.raises(inv.NonIntegralWeight):
        inv.semisimple_lift(inv.SL2Problem(3, 1))
    S = reps.symmetric_power(dual_forms(3), 1)
    assert all(not reps.semi_invariant_oracle(S, k) for k in range(4))


def test_discriminant_weight_from_transformation_law():
    assert reps.is_semi_invariant(S2Q, reps.polynomial_to_vector(S2Q, DISC), inv.semisimple_lift(inv.SL2Problem(2, 2)).weight)
