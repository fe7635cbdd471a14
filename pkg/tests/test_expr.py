import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discde import expr


def test_parse_arithmetic():
    node = expr.parse_expr("1 + 2*z - z^2")
    assert expr.evaluate(node, 3.0) == 1 + 6 - 9


def test_parse_functions_and_eval():
    node = expr.parse_expr("exp(z) * sin(z)")
    z = 0.3 + 0.2j
    assert abs(expr.evaluate(node, z) - cmath.exp(z) * cmath.sin(z)) < 1e-14


def test_parse_error_position():
    with pytest.raises(expr.ParseError):
        expr.parse_expr("1 + * z")


def test_integer_exponent_required():
    with pytest.raises(expr.ParseError):
        expr.parse_expr("z^0.5")


def test_negative_exponent():
    node = expr.parse_expr("(1-z)^(-2)")
    assert abs(expr.evaluate(node, 0.5) - 4.0) < 1e-14


def test_log_branch_cut():
    node = expr.parse_expr("log(z)")
    with pytest.raises(expr.BranchCutError):
        expr.series_coefficients(node, -1.0, 8)
    with pytest.raises(expr.DomainError):
        expr.series_coefficients(node, 0.0, 8)


def test_jet_against_derivatives():
    # d/dz exp(2z) jets at z=0.1: value, 2e, 4e, 8e, 16e
    node = expr.parse_expr("exp(2*z)")
    jets = expr.eval_jet(node, 0.1, order=4)
    base = cmath.exp(0.2)
    for k, j in enumerate(jets):
        assert abs(j - 2**k * base) < 1e-12


def test_taylor_at_matches_eval():
    node = expr.parse_expr("1/(1-z)^4")
    ps = expr.taylor_at(node, 0.0, 64)
    for z in (0.1, 0.3j, -0.2 + 0.2j):
        assert abs(ps.evaluate(z) - expr.evaluate(node, z)) < 1e-10


def test_eval_array_vectorized():
    node = expr.parse_expr("-4*z/(1-z)^4")
    zs = np.array([0.1, 0.5j, -0.3])
    vals = expr.eval_array(node, zs)
    assert np.allclose(vals, -4 * zs / (1 - zs) ** 4)


_coef = st.one_of(
    st.integers(-5, 5).map(float),
    st.floats(-3, 3, allow_nan=False, allow_infinity=False, width=32),
)


@st.composite
def _expressions(draw, depth=0):
    if depth >= 3 or draw(st.booleans()):
        return draw(st.one_of(
            st.just("z"),
            _coef.map(lambda c: repr(float(c))),
        ))
    left = draw(_expressions(depth=depth + 1))
    right = draw(_expressions(depth=depth + 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({left} {op} {right})"


@given(_expressions())
@settings(max_examples=60, deadline=None)
def test_print_parse_round_trip(text):
    node = expr.parse_expr(text)
    reparsed = expr.parse_expr(expr.to_string(node))
    for z in (0.25, -0.4 + 0.1j):
        a = expr.evaluate(node, z)
        b = expr.evaluate(reparsed, z)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


@given(st.complex_numbers(max_magnitude=0.5, allow_nan=False,
                          allow_infinity=False))
@settings(max_examples=40, deadline=None)
def test_substitute_evaluates_composition(w):
    outer = expr.parse_expr("exp(z) + z^2")
    inner = expr.parse_expr("z/2 + 0.1")
    composed = expr.substitute(outer, inner)
    direct = expr.evaluate(outer, expr.evaluate(inner, w))
    assert abs(expr.evaluate(composed, w) - direct) < 1e-12
