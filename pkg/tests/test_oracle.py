import math

import mpmath
import pytest

from transgamma import oracle
from transgamma.coeffs import gen_f_table
from transgamma.exceptions import DomainError

A3 = 3 + 0.1 * math.sqrt(3)


@pytest.fixture(autouse=True)
def wide_context():
    # oracle values carry 192 bits; compare them without rounding to 53
    with mpmath.workprec(256):
        yield


def test_q_at_zero():
    assert oracle.oracle_q(7.5, 0) == 1


@pytest.mark.parametrize("a,x", [(3, A3), (3, 1.0), (30, 45.0), (0.5, 10.0)])
def test_p_plus_q(a, x):
    assert abs(oracle.oracle_q(a, x) + oracle.oracle_p(a, x) - 1) <= mpmath.mpf(10) ** -25


@pytest.mark.parametrize("a,x", [(3, A3), (0.7, 0.2), (12.5, 30.0), (250, 240), (1000, 1100)])
def test_precision_ladder(a, x):
    lo = oracle.oracle_q(a, x, prec=192)
    hi = oracle.oracle_q(a, x, prec=384)
    assert abs(lo - hi) <= mpmath.mpf(10) ** -25 * abs(hi)


@pytest.mark.parametrize("a", [3, 30])
@pytest.mark.parametrize("frac", [0.5, 1.0, 2.0])
def test_upper_over_gamma_is_q(a, frac):
    x = a * frac
    ratio = oracle.oracle_gamma_upper(a, x) / oracle.oracle_gamma(a)
    assert abs(ratio - oracle.oracle_q(a, x)) <= mpmath.mpf(10) ** -24


def test_upper_examples():
    with mpmath.workdps(40):
        assert abs(oracle.oracle_gamma_upper(1, 3) - mpmath.exp(-3)) <= mpmath.mpf(10) ** -30
        assert abs(oracle.oracle_gamma_upper(4, mpmath.mpf(10) ** -30) - 6) <= mpmath.mpf(10) ** -25


def test_upper_negative_order_by_recurrence():
    # Gamma(s+1, z) = s Gamma(s, z) + z^s e^-z, checked at s = -50
    z = mpmath.mpf(50)
    g50 = oracle.oracle_gamma_upper(-50, z)
    g49 = oracle.oracle_gamma_upper(-49, z)
    with mpmath.workprec(220):
        rhs = -50 * g50 + z**-50 * mpmath.exp(-z)
    assert abs(g49 - rhs) <= mpmath.mpf(10) ** -25 * abs(g49)
    # against mpmath's own implementation as a second opinion
    with mpmath.workdps(40):
        assert abs(g50 / mpmath.gammainc(-50, 50) - 1) < mpmath.mpf(10) ** -25


def test_gammastar_examples():
    with mpmath.workdps(40):
        assert abs(oracle.oracle_gammastar(2.5, 0) - mpmath.rgamma(3.5)) <= mpmath.mpf(10) ** -30
        x = mpmath.mpf(2)
        assert abs(oracle.oracle_gammastar(1, 2) - (1 - mpmath.exp(-x)) / x) <= mpmath.mpf(10) ** -25


def test_gammastar_consistent_with_p():
    a, x = 5, 3
    with mpmath.workdps(40):
        alt = mpmath.mpf(x) ** -a * (1 - oracle.oracle_q(a, x))
    assert abs(oracle.oracle_gammastar(a, x) - alt) <= mpmath.mpf(10) ** -24


def test_gammastar_sign_change_near_negative_zero():
    # the negative zero of gamma*(-10.5, .) lies near -10.5 - 1/3
    left = oracle.oracle_gammastar(-10.5, -10.8333 - 0.01)
    right = oracle.oracle_gammastar(-10.5, -10.8333 + 0.01)
    assert left * right < 0


def test_contour_at_lambda_one():
    third = oracle.oracle_c_contour(0, 1, r=0.5, M=64)
    c1 = oracle.oracle_c_contour(1, 1, r=0.5, M=64)
    assert oracle.agreeing_digits(third, mpmath.mpf(-1) / 3) >= 10
    assert oracle.agreeing_digits(c1, mpmath.mpf(-1) / 540) >= 10


def test_contour_exponential_convergence():
    exact = mpmath.mpf(-1) / 3
    errs = [abs(oracle.oracle_c_contour(0, 1, r=0.5, M=M) - exact) for M in (16, 32, 64)]
    assert errs[0] / errs[1] >= 100
    # at M=64 the sum has reached the working precision
    assert errs[1] / max(errs[2], mpmath.mpf(2) ** -200) >= 100


def test_contour_matches_f_series():
    lam = 1.05
    with mpmath.workdps(40):
        eta = mpmath.sqrt(2 * (mpmath.mpf(lam) - 1 - mpmath.log(lam)))
        col = gen_f_table(46, 3).column(3)
        series = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * eta**k for k, c in enumerate(col))
    assert oracle.agreeing_digits(oracle.oracle_c_contour(3, lam, r=0.5, M=64), series) >= 10


def test_contour_parameter_errors():
    with pytest.raises(ValueError):
        oracle.oracle_c_contour(0, 1.6, r=0.5)
    with pytest.raises(ValueError):
        oracle.oracle_c_contour(0, 1, r=1.2)


def test_agreeing_digits():
    assert oracle.agreeing_digits(0.3855, 0.38552) == 4
    assert oracle.agreeing_digits(1.0, 1.0) == math.inf
    with pytest.raises(DomainError):
        oracle.agreeing_digits(1.0, 0)


def test_format_digits():
    assert oracle.format_digits(mpmath.mpf(1) / 3, 5) == "0.33333"
