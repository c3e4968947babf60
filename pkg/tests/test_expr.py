from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperode.errors import DomainError, ParseError, UnboundParameterError, UnknownFunctionError
from hyperode.expr import HFunction, Jet2, eval_jet, parse

from cases import random_hs


def fd_derivs(f, x, step=1e-3):
    """Richardson-extrapolated central differences for f' and f''."""
    def d(s):
        fp, fm, f0 = f(x + s), f(x - s), f(x)
        return (fp - fm) / (2 * s), (fp - 2 * f0 + fm) / (s * s)
    (a1, a2), (b1, b2) = d(step), d(step / 2)
    return (4 * b1 - a1) / 3, (4 * b2 - a2) / 3


@pytest.mark.parametrize("text,x,expected", [
    ("1 + 2*3", 0.0, 7.0),
    ("2^3^2", 0.0, 512.0),
    ("-x^2", 3.0, -9.0),
    ("(-x)^2", 3.0, 9.0),
    ("x/2/4", 8.0, 1.0),
    ("1 - 2 - 3", 0.0, -4.0),
    ("--x", 2.0, 2.0),
    ("2*pi", 0.0, 2 * math.pi),
    ("sin(pi/2) + cos(0)", 0.0, 2.0),
    ("exp(ln(x))", 2.5, 2.5),
    ("sqrt(x)^2", 7.0, 7.0),
    ("1.5e-1*x", 2.0, 0.3),
    (".5 + x", 1.0, 1.5),
    ("abs(x)", -3.0, 3.0),
    ("tanh(0) + cosh(0) + sinh(0)", 0.0, 1.0),
    ("x^-1", 4.0, 0.25),
])
def test_precedence_and_values(text, x, expected):
    assert HFunction.parse(text)(x) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_unary_minus_binds_looser_than_power():
    h = HFunction.parse("-omega^2", omega=3.0)
    assert h(0.0) == -9.0


def test_parameters_and_binding():
    e = parse("a*x + b")
    assert e.params() == {"a", "b"}
    with pytest.raises(UnboundParameterError):
        HFunction(e, {"a": 1.0})
    h = HFunction.parse("a*x + b", a=2, b=1)
    assert h(3.0) == 7.0


def test_custom_variable():
    h = HFunction.parse("exp(t) + x", variable="t", x=1.0)
    assert h(0.0) == 2.0


@pytest.mark.parametrize("text,offset", [
    ("1 +", 3),
    ("(x", 2),
    ("x $ 2", 2),
    ("x x", 2),
    ("", 0),
    ("sin", 3),
    ("2*)", 2),
])
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert info.value.expected


def test_unknown_function():
    with pytest.raises(UnknownFunctionError) as info:
        parse("1 + foo(x)")
    assert info.value.offset == 4
    assert "sin" in info.value.expected


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse("é + 1")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        parse("x + é")
    assert info.value.offset == 4


@pytest.mark.parametrize("text,x", [
    ("ln(x)", -1.0),
    ("sqrt(x)", -1.0),
    ("1/x", 0.0),
    ("x^0.5", -2.0),
    ("exp(x)", 1000.0),
])
def test_domain_errors(text, x):
    with pytest.raises(DomainError):
        HFunction.parse(text).jet(x)


@pytest.mark.parametrize("text", random_hs(12, seed=11) + [
    "x^3 - 2*x", "sin(x)*exp(-x^2)", "1/(1 + x^2)", "sqrt(2 + x)", "tan(0.3*x)",
    "(x + 2)^2.5 + ln(3 + x)", "abs(x - 5)", "2^x",
])
@pytest.mark.parametrize("x", [-0.7, 0.1, 0.9])
def test_jet_matches_finite_differences(text, x):
    h = HFunction.parse(text)
    v, d1, d2 = h.jet(x)
    f1, f2 = fd_derivs(h, x)
    scale = 1 + abs(v) + abs(d1) + abs(d2)
    assert abs(d1 - f1) <= 1e-8 * scale
    assert abs(d2 - f2) <= 1e-6 * scale


def test_vectorized_matches_scalar():
    h = HFunction.parse("sin(x)*x^2 + exp(-x)")
    xs = np.linspace(-2, 2, 7)
    jv = h.jet(xs)
    for i, x in enumerate(xs):
        js = h.jet(float(x))
        assert (jv.v[i], jv.d1[i], jv.d2[i]) == pytest.approx(tuple(js), rel=1e-15)
    assert eval_jet(h, 0.5) == h.jet(0.5)


def test_constant_is_array_safe():
    h = HFunction.constant(-2.0)
    out = h.jet(np.zeros(4))
    assert np.shape(out.v) == (4,) and np.all(out.d1 == 0)


def test_negative_base_integer_power_keeps_sign():
    h = HFunction.parse("x^3")
    assert h.jet(-2.0) == Jet2(-8.0, 12.0, -12.0)


def test_to_text_round_trips():
    for text in random_hs(20, seed=3) + ["-x^2", "2^3^2", "(1 - x)/(2*x)"]:
        e = parse(text)
        again = parse(e.to_text())
        assert again == e


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6), st.floats(-2, 2))
def test_polynomial_derivatives_exact(coeffs, x):
    text = " + ".join(f"({c!r})*x^{k}" for k, c in enumerate(coeffs))
    v, d1, d2 = HFunction.parse(text).jet(x)
    p = np.polynomial.Polynomial(coeffs)
    scale = 1 + sum(abs(c) * 2 ** k * k * k for k, c in enumerate(coeffs))
    assert v == pytest.approx(p(x), abs=1e-12 * scale)
    assert d1 == pytest.approx(p.deriv(1)(x), abs=1e-12 * scale)
    assert d2 == pytest.approx(p.deriv(2)(x), abs=1e-12 * scale)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 3))
def test_jet_algebra_product_and_quotient(a, b, c):
    x = Jet2(a, 1.0, 0.0)
    y = Jet2(c, b, a)
    q = (x * y) / y
    assert q.v == pytest.approx(x.v, abs=1e-12 * (1 + abs(a)))
    assert q.d1 == pytest.approx(1.0, abs=1e-10 * (1 + abs(a) + abs(b)) ** 2)
    assert q.d2 == pytest.approx(0.0, abs=1e-9 * (1 + abs(a) + abs(b)) ** 3 / c ** 2)
