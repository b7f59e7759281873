"""Shared strategies and an independent sympy bridge used as a test oracle."""
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from omega_forge.polycore import Polynomial, matrix_variables

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.variables) if p.variables else ()
    if len(p.variables) == 1:
        syms = (syms,)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for s, a in zip(syms, e):
            term *= s ** a
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, variables) -> Polynomial:
    syms = sympy.symbols(variables)
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for mon, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(mon)] = Fraction(int(c.p), int(c.q))
    return Polynomial(tuple(variables), terms)


def polynomials(variables, max_degree=3, max_terms=4):
    variables = tuple(variables)
    k = len(variables)
    # a monomial is a multiset of at most max_degree variable indices
    exps = st.lists(st.integers(0, k - 1), max_size=max_degree).map(lambda idx: tuple(idx.count(i) for i in range(k)))
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=3)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Polynomial(variables, t))


X2 = matrix_variables(2).names
X3 = matrix_variables(3).names


# acceptance criteria report one line each at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
