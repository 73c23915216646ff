from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transgamma.polynomial import RationalPoly, series_exp, series_mul, series_pow

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=1000)
polys = st.lists(fractions, max_size=8).map(RationalPoly)


def test_trailing_zeros_stripped():
    p = RationalPoly([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree() == 1
    assert RationalPoly([0, 0]).degree() == -1
    assert RationalPoly().is_zero()


def test_arithmetic_and_str():
    x = RationalPoly([0, 1])
    p = (x + 1) ** 2
    assert p == RationalPoly([1, 2, 1])
    assert p - 1 == RationalPoly([0, 2, 1])
    assert 1 - p == RationalPoly([0, -2, -1])
    assert (p / 2)[2] == Fraction(1, 2)
    assert str(RationalPoly([Fraction(-1, 3), 0, Fraction(1, 3)])) == "1/3*x^2 - 1/3"
    assert str(RationalPoly()) == "0"


def test_derivative_reflect_parity():
    p = RationalPoly([1, 0, 3])
    assert p.derivative() == RationalPoly([0, 6])
    assert p.parity() == 0
    assert RationalPoly([0, 1, 0, 1]).parity() == 1
    assert RationalPoly([1, 1]).parity() is None
    assert RationalPoly([1, 2, 3]).reflect() == RationalPoly([1, -2, 3])


def test_rotate_matches_complex_evaluation():
    p = RationalPoly([Fraction(1, 12), 0, Fraction(-11, 36), 0, Fraction(1, 18)])  # even, n=0
    q = RationalPoly([0, Fraction(1, 12), 0, Fraction(-11, 36), 0, Fraction(1, 18)])  # odd, n=1
    t = 1.3
    for n, poly in ((0, p), (1, q), (2, p)):
        direct = (-1j) ** n * sum(float(c) * (1j * t) ** k for k, c in enumerate(poly.coeffs))
        assert abs(direct.imag) < 1e-14
        assert poly.rotate(n).eval_float(t) == pytest.approx(direct.real, rel=1e-14)
    with pytest.raises(ValueError):
        p.rotate(1)


@given(polys, polys)
def test_ring_laws(p, q):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * q == p * q + q * q
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree() == p.degree() + q.degree()


@settings(max_examples=200)
@given(polys, st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_eval_float_is_correctly_rounded(p, x):
    exact = p(Fraction(x))
    assert p.eval_float(x) == float(exact)


def test_series_helpers():
    # (1 + x)^(1/2) squared is 1 + x
    h = series_pow([Fraction(1), Fraction(1)], Fraction(1, 2), 8)
    assert series_mul(h, h, 8) == [1, 1, 0, 0, 0, 0, 0, 0]
    # exp(x) coefficients
    e = series_exp([Fraction(0), Fraction(1)], 6)
    assert e == [Fraction(1, 1), 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24), Fraction(1, 120)]
    with pytest.raises(ValueError):
        series_pow([Fraction(2)], Fraction(1, 2), 3)
