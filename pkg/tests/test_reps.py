from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import X2, to_sympy
from omega_forge import reps
from omega_forge.polycore import Polynomial, determinant, matrix_of, matrix_variables, parse, to_text

det2 = determinant(matrix_of(matrix_variables(2)))


def forms(d):
    return reps.binary_forms_module(d)


def dual_forms(d):
    return reps.dual_action_module(forms(d))


def test_forms_d1_is_linear_substitution():
    V = forms(1)
    assert [[to_text(e) for e in row] for row in V.C] == [["x11", "x12"], ["x21", "x22"]]
    ident = {"x11": 1, "x12": 0, "x21": 0, "x22": 1}
    assert V.evaluate(ident) == ((1, 0), (0, 1))


def test_forms_d2_det_and_degree():
    V = forms(2)
    assert V.entry_degrees() == {2}
    assert determinant(V.C) == det2 ** 3


def test_forms_d2_diagonal_action():
    t = sympy.Symbol("t")
    V = forms(2)
    M = sympy.Matrix([[to_sympy(e) for e in row] for row in V.C]).subs({"x11": t, "x12": 0, "x21": 0, "x22": 1})
    assert M == sympy.diag(t ** 2, t, 1)
    assert V.labels == ("u2", "uv", "v2")


def test_forms_action_against_sympy():
    # (m.F)(u, v) = F((u, v) m) for F = u^2, read off the matrix column
    u, v = sympy.symbols("u v")
    x11, x12, x21, x22 = sympy.symbols("x11 x12 x21 x22")
    new_u = u * x11 + v * x21
    image = sympy.Poly(sympy.expand(new_u ** 2), u, v)
    V = forms(2)
    col = [to_sympy(V.C[j][0]) for j in range(3)]
    assert col == [sympy.expand(image.coeff_monomial(u ** 2)), sympy.expand(image.coeff_monomial(u * v)), sympy.expand(image.coeff_monomial(v ** 2))]


def test_dual_module():
    V = forms(1)
    D = reps.dual_action_module(V)
    assert D.labels == ("a", "b")
    assert reps.check_comodule(D).passed
    for d in (1, 2, 3):
        V = forms(d)
        DD = reps.dual_action_module(reps.dual_action_module(V))
        assert DD.C == V.C
        assert reps.check_counit(reps.dual_action_module(V))


def test_dual_is_transpose_of_transposed_arguments():
    V, D = forms(2), dual_forms(2)
    swap = {"x12": "x21", "x21": "x12"}
    for i in range(3):
        for j in range(3):
            assert D.C[i][j] == V.C[j][i].rename(swap, X2)


def test_symmetric_powers():
    D = dual_forms(2)
    assert reps.symmetric_power(D, 1).C == D.C
    S2 = reps.symmetric_power(D, 2)
    assert S2.dim == 6
    assert S2.labels == ("a^2", "a*b", "a*c", "b^2", "b*c", "c^2")
    assert reps.symmetric_power(forms(2), 2).entry_degrees() == {4}
    assert reps.check_comodule(S2).passed


def test_dimension_cap(monkeypatch):
    with pytest.raises(reps.DimensionCapExceeded):
        reps.symmetric_power(dual_forms(4), 3, cap=20)
    monkeypatch.setenv("OMEGA_FORGE_CAP", "5")
    with pytest.raises(reps.DimensionCapExceeded):
        reps.symmetric_power(dual_forms(2), 2)


def test_twist():
    V = forms(1)
    assert reps.twist(V, 0) == V
    assert reps.twist(reps.twist(V, 1), -1) == V
    T = reps.twist(V, 1)
    assert T.entry_degrees() == {3} and T.twist == 1
    R = reps.twist(V, -1)
    assert isinstance(R, reps.RationalRep) and R.den == 1


def test_minimal_twist_exponent():
    assert reps.minimal_twist_exponent(forms(3)) == 0
    C = reps.contragredient(forms(1))
    assert isinstance(C, reps.RationalRep)
    assert reps.minimal_twist_exponent(C) == 1
    # det^-1 adj(X)^T is the inverse transpose
    assert [[to_text(e) for e in row] for row in C.N] == [["x22", "-x21"], ["-x12", "x11"]]
    assert reps.minimal_twist_exponent(reps.twist(reps.character_module(2, 1), -3)) == 2
    assert reps.minimal_twist_exponent(reps.character_module(2, 1)) == -1


@pytest.mark.parametrize("pair", range(5))
def test_twist_exponents_add_on_tensors(pair):
    from omega_forge.suite import tensor_pairs

    V, W = tensor_pairs(2)[pair]
    T = reps.tensor(V, W)
    assert reps.minimal_twist_exponent(T) == reps.minimal_twist_exponent(V) + reps.minimal_twist_exponent(W)
    assert reps.check_comodule(T).passed


def test_contragredient_is_inverse_transpose():
    C = reps.contragredient(forms(2))
    assert reps.check_comodule(C).passed
    # C(X) * C_V(X)^T = Id after clearing det^den
    V = forms(2)
    prod = [[sum((C.N[i][k] * V.C[j][k] for k in range(3)), Polynomial.zero(X2)) for j in range(3)] for i in range(3)]
    d = det2 ** C.den
    assert all(prod[i][j] == (d if i == j else Polynomial.zero(X2)) for i in range(3) for j in range(3))


def zoo():
    return [
        reps.trivial_module(2),
        reps.character_module(2, 1),
        reps.character_module(2, 2),
        forms(1),
        forms(3),
        dual_forms(2),
        reps.symmetric_power(dual_forms(2), 2),
        reps.symmetric_power(dual_forms(3), 2),
        reps.tensor(forms(1), dual_forms(2)),
        reps.standard_module(3),
        reps.symmetric_power(reps.standard_module(3), 2),
    ]


@pytest.mark.parametrize("V", zoo(), ids=lambda V: V.name)
def test_comodule_axioms(V):
    report = reps.check_comodule(V)
    assert report.counit and report.multiplicative and report.zero_idempotent


@pytest.mark.parametrize("V", [forms(2), dual_forms(2), reps.symmetric_power(dual_forms(2), 2)], ids=lambda V: V.name)
def test_symbolic_and_infinitesimal_checks_agree(V):
    assert reps.check_comodule(V, "symbolic").passed
    assert reps.check_comodule(V, "infinitesimal").passed


def test_broken_module_is_rejected():
    X = matrix_variables(2).names
    bad = reps.PolynomialComodule(2, ("p", "q"), ((parse("x11", X), parse("x21", X)), (parse("x21", X), parse("x22", X))))
    for method in ("symbolic", "infinitesimal"):
        assert not reps.check_comodule(bad, method).passed
    with pytest.raises(reps.ComoduleFailure):
        reps.require_comodule(bad)


def test_zero_acts_as_idempotent_not_identity():
    # the counit C(Id) = Id holds, but C(0) is a projection, not Id
    V = reps.character_module(2, 1)
    assert V.at_zero() == ((0,),)
    T = reps.trivial_module(2)
    assert T.at_zero() == ((1,),)


def test_oracle_examples():
    assert reps.semi_invariant_oracle(reps.trivial_module(2), 0) == [(Fraction(1),)]
    S2 = reps.symmetric_power(dual_forms(2), 2)
    basis = reps.semi_invariant_oracle(S2, 2)
    assert len(basis) == 1
    disc = reps.vector_to_polynomial(S2, basis[0])
    a, b, c = sympy.symbols("a b c")
    assert sympy.simplify(to_sympy(disc) / (b ** 2 - 4 * a * c)).is_constant()
    assert reps.semi_invariant_oracle(forms(2), 1) == []
    assert reps.semi_invariant_oracle(S2, 1) == []


def test_discriminant_transformation_law_sympy():
    # independent check of the convention: the coefficients of F((u,v) m) have
    # discriminant det(m)^2 times the discriminant of F
    u, v, A, B, Cc = sympy.symbols("u v A B C")
    x11, x12, x21, x22 = sympy.symbols("x11 x12 x21 x22")
    F = A * u ** 2 + B * u * v + Cc * v ** 2
    G = sympy.Poly(sympy.expand(F.subs({u: u * x11 + v * x21, v: u * x12 + v * x22}, simultaneous=True)), u, v)
    a2, b2, c2 = (G.coeff_monomial(m) for m in (u ** 2, u * v, v ** 2))
    assert sympy.expand(b2 ** 2 - 4 * a2 * c2 - (x11 * x22 - x12 * x21) ** 2 * (B ** 2 - 4 * A * Cc)) == 0
    S2 = reps.symmetric_power(dual_forms(2), 2)
    disc = parse("b^2 - 4*a*c", ("a", "b", "c"))
    assert reps.is_semi_invariant(S2, reps.polynomial_to_vector(S2, disc), 2)


def test_oracle_outputs_are_reverified():
    S3 = reps.symmetric_power(dual_forms(3), 2)
    for k in range(4):
        for v in reps.semi_invariant_oracle(S3, k):
            assert reps.is_semi_invariant(S3, v, k)


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_vector_polynomial_round_trip(v):
    S2 = reps.symmetric_power(dual_forms(2), 2)
    v = tuple(Fraction(x) for x in v)
    assert reps.polynomial_to_vector(S2, reps.vector_to_polynomial(S2, v)) == v


@pytest.mark.parametrize("V", [forms(2), reps.twist(forms(1), -1), reps.symmetric_power(dual_forms(2), 2)], ids=str)
def test_descriptor_round_trip(V):
    data = reps.to_descriptor(V)
    back = reps.from_descriptor(data, 2)
    assert reps.to_descriptor(back) == data
    assert set(data) >= {"dim", "labels", "entries", "twist"}
