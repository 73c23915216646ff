import math
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transgamma import oracle
from transgamma.coeffs import gen_C
from transgamma.exceptions import DegenerateExpansionError, DomainError
from transgamma.expansions import (
    Regime,
    envelope_truncation,
    eta_of_lambda,
    gamma_outer_lower,
    gamma_outer_neg,
    gamma_outer_upper,
    gamma_transition_point,
    gammastar_asym,
    hybrid_q,
    optimal_truncation,
    q_outer,
    q_transition,
    q_uniform,
    rotated_transition_terms,
    transition_terms,
    uniform_coefficient,
    uniform_terms,
)
from transgamma.special import dawson


def oq(a, x):
    return float(oracle.oracle_q(a, x))


# --------------------------------------------------------------------------
# truncation


def test_optimal_truncation_examples():
    assert optimal_truncation([1, 0.1, 0.01, 0.1, 1]) == 2
    assert optimal_truncation([1, 0.5, 0.25]) == 2
    assert optimal_truncation([3, 1, 1, 2]) == 1


def test_optimal_truncation_on_figure_one_terms():
    # the first local minimum is shallow; the deepest term of the plateau is near 34
    mags = [abs(t) for t in transition_terms(3.0, 0.1, 61)]
    deepest = min(range(len(mags)), key=mags.__getitem__)
    assert 30 <= deepest <= 40
    assert optimal_truncation(mags) < deepest


def test_envelope_truncation():
    mags = [1, 0.1, 1e-4, 0.05, 0.01, 0.02, 1.0]
    # n=2 is followed by a big term, the envelope max(|t_n|, |t_n+1|) is smallest at n=4
    assert envelope_truncation(mags, 1.0) == 4


# --------------------------------------------------------------------------
# transition expansion


@pytest.mark.parametrize("a", [1.0, 7.0, 250.0])
def test_q_transition_first_term(a):
    rep = q_transition(a, 0.0, 1)
    assert rep.value == pytest.approx(0.5 - 1 / (3 * math.sqrt(2 * math.pi * a)), rel=1e-15)
    assert rep.terms_used == 1
    assert rep.regime is Regime.TRANSITION


def test_q_transition_figure_one_digits():
    a, tau = 3.0, 0.1
    q = oracle.oracle_q(a, a + tau * math.sqrt(a))
    rep = q_transition(a, tau, 34)
    assert oracle.agreeing_digits(rep.value, q) >= 11


def test_q_transition_large_a():
    a, tau = 1e4, 1.0
    rep = q_transition(a, tau, 6)
    assert abs(rep.value - oq(a, a + tau * 100)) <= rep.error_estimate
    assert rep.first_neglected <= rep.error_estimate


def test_q_transition_domain():
    with pytest.raises(DomainError):
        q_transition(4.0, -2.0, 3)


# --------------------------------------------------------------------------
# uniform expansion


@pytest.mark.parametrize("a", [3.0, 40.0])
def test_q_uniform_matches_transition_at_lambda_one(a):
    assert q_uniform(a, 1.0, 1).value == q_transition(a, 0.0, 1).value


def test_q_uniform_figure_one_digits():
    a = 3.0
    lam = 1 + 0.1 / math.sqrt(3)
    q = oracle.oracle_q(a, a * lam)
    # the minimal term is n = 17
    mags = [abs(t) for t in uniform_terms(a, lam, 31)]
    assert optimal_truncation(mags) == 17
    assert 9 <= oracle.agreeing_digits(q_uniform(a, lam, 17).value, q) < 11


def test_q_uniform_oracle():
    rep = q_uniform(100.0, 2.0, 5)
    # first_neglected is 5.5e-29 but argument rounding in erfc and exp costs
    # about 4e-14 relative here, which the estimate covers
    assert abs(rep.value - oq(100, 200)) <= rep.error_estimate
    assert rep.error_estimate < 1e-13 * rep.value


def test_q_uniform_domain():
    with pytest.raises(DomainError):
        q_uniform(3.0, 0.0, 2)


@pytest.mark.parametrize("k", range(2, 7))
@pytest.mark.parametrize("side", [1, -1])
def test_eta_tends_to_lambda_minus_one(k, side):
    d = side * 10.0**-k
    assert eta_of_lambda(1 + d) / d == pytest.approx(1.0, abs=2 * 10.0**-k)


def test_eta_sign_and_value():
    assert eta_of_lambda(1.0) == 0.0
    assert eta_of_lambda(0.5) < 0 < eta_of_lambda(2.0)
    assert eta_of_lambda(2.0) == pytest.approx(math.sqrt(2 * (1 - math.log(2))), rel=1e-15)


@pytest.mark.parametrize("n", [0, 1, 2, 4, 6])
@pytest.mark.parametrize("lam", [0.3, 0.8, 1.05, 1.6, 1.75])
def test_uniform_coefficient_against_contour(n, lam):
    # both branches: |eta| > 0.5 at lam = 0.3, 1.6, 1.75
    ref = float(oracle.oracle_c_contour(n, lam, r=0.85, M=256))
    got = uniform_coefficient(n, eta_of_lambda(lam), lam)
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_uniform_coefficient_switch_is_continuous():
    for n in (1, 3):
        lo = uniform_coefficient(n, 0.5 - 1e-9)
        hi = uniform_coefficient(n, 0.5 + 1e-9)
        assert lo == pytest.approx(hi, rel=1e-7)


def test_uniform_coefficient_zero_matches_C():
    for n in range(5):
        assert uniform_coefficient(n, 0.0) == pytest.approx(float(gen_C(2 * n)(0)), rel=1e-15)


# --------------------------------------------------------------------------
# outer expansions


def _rel(rep, ref):
    return abs(rep.value - float(ref))


def test_outer_first_terms():
    a, z = 100.0, 200.0
    assert gamma_outer_upper(a, z, 1).value == pytest.approx(z**a * math.exp(-z) / (z - a), rel=1e-13)
    low = gamma_outer_lower(a, 50.0, 1)
    assert low.value == pytest.approx(50.0**a * math.exp(-50.0) / (a - 50.0), rel=1e-13)
    assert low.value > 0 and low.sign == 1
    neg = gamma_outer_neg(50.0, 50.0, 1)
    assert neg.value == pytest.approx(50.0**-50 * math.exp(-50.0) / 100.0, rel=1e-13)


def test_outer_upper_oracle():
    rep = gamma_outer_upper(100.0, 200.0, 8)
    assert _rel(rep, oracle.oracle_gamma_upper(100, 200)) <= rep.error_estimate
    opt = gamma_outer_upper(100.0, 150.0)
    assert _rel(opt, oracle.oracle_gamma_upper(100, 150)) <= 2 * opt.error_estimate


def test_outer_lower_oracle():
    rep = gamma_outer_lower(100.0, 50.0, 8)
    assert _rel(rep, oracle.oracle_gamma_lower(100, 50)) <= rep.error_estimate


def test_outer_lower_plus_upper_gives_gamma():
    # Gamma(400, .) overflows binary64, so the split Gamma = gamma + Gamma is
    # checked after normalising by Gamma(a)
    a = 400.0
    low, up = q_outer(a, 300.0), q_outer(a, 500.0)
    assert low.regime is Regime.OUTER_LOWER and up.regime is Regime.OUTER_UPPER
    p_low = 1.0 - low.value
    assert abs(p_low + float(oracle.oracle_q(a, 300)) - 1.0) <= low.error_estimate + 1e-16
    assert abs(up.value + float(oracle.oracle_p(a, 500)) - 1.0) <= up.error_estimate + 1e-16
    # the unnormalised values still come back in log form
    g = gamma_outer_lower(a, 300.0)
    assert g.value == math.inf
    rel_est = low.error_estimate / float(oracle.oracle_p(a, 300))
    assert abs(g.log_magnitude - float(mpmath.log(oracle.oracle_gamma_lower(a, 300)))) <= rel_est


def test_outer_neg_oracle_and_decay():
    rep = gamma_outer_neg(50.0, 50.0, 8)
    assert _rel(rep, oracle.oracle_gamma_upper(-50, 50)) <= rep.error_estimate
    from transgamma.expansions import _outer_series
    mags = [abs(t) for t in _outer_series(50.0, 1.0, 100.0, 9, negative=True)]
    assert all(x > y for x, y in zip(mags, mags[1:]))


def test_outer_degenerate_and_domain():
    with pytest.raises(DegenerateExpansionError):
        gamma_outer_upper(100.0, 105.0, 3)
    with pytest.raises(DegenerateExpansionError):
        gamma_outer_lower(100.0, 95.0, 3)
    with pytest.raises(DomainError):
        gamma_outer_upper(100.0, 50.0, 3)
    with pytest.raises(DomainError):
        gamma_outer_lower(100.0, 200.0, 3)


def test_outer_log_form_survives_overflow():
    rep = gamma_outer_upper(1000.0, 2000.0)
    assert rep.log_magnitude is not None and rep.log_magnitude > 709
    assert rep.value == math.inf
    assert q_outer(1000.0, 2000.0).value == pytest.approx(oq(1000, 2000), rel=1e-12)


# --------------------------------------------------------------------------
# transition point and negative order


def test_transition_point_first_term():
    z = 50.0
    rep = gamma_transition_point(z, z, 1)
    expected = z**z * math.exp(-z) * (math.sqrt(math.pi / (2 * z)) - 1 / (3 * z))
    assert rep.value == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("a", [50.0, 50.5])
def test_transition_point_oracle(a):
    rep = gamma_transition_point(a, 50.0, 3)
    assert _rel(rep, oracle.oracle_gamma_upper(a, 50)) <= rep.error_estimate
    assert rep.warning is None


def test_transition_point_warns_far_from_a():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = gamma_transition_point(50.0, 60.0, 3)
    assert rep.warning is not None
    assert caught


def test_rotated_terms_are_real():
    tau = 1.3
    for n in range(9):
        c = gen_C(n)
        z = (-1j) ** n * sum(complex(k) * (1j * tau) ** i for i, k in enumerate(c.coeffs))
        assert abs(z.imag) <= 1e-15 * max(1.0, abs(z.real))
        assert c.rotate(n).eval_float(tau) == pytest.approx(z.real, rel=1e-13, abs=1e-15)
    assert len(rotated_transition_terms(-20.3, tau, 9)) == 9


def test_gammastar_asym_oracle():
    a, tau = -20.3, 0.5
    x = a - tau * math.sqrt(-a)
    rep = gammastar_asym(a, x, 6)
    ref = (-mpmath.mpf(x)) ** a * oracle.oracle_gammastar(a, x)
    assert abs(rep.value - float(ref)) <= rep.error_estimate


def test_gammastar_asym_at_half_integer_root():
    # a = -20.5 and tau = 0: cos(pi a) = 0 and the Dawson term vanishes, leaving
    # only the sin-weighted series
    a = -20.5
    rep = gammastar_asym(a, a, 6)
    s = math.fsum(rotated_transition_terms(a, 0.0, 6))
    assert dawson(0.0) == 0.0
    # cos(pi a) rounds to about 8e-15 rather than 0
    assert rep.value == pytest.approx(math.sin(math.pi * a) / math.pi * math.sqrt(2 * math.pi / -a) * s, abs=1e-14)
    assert abs(rep.value) < 0.1


def test_gammastar_asym_near_integer():
    with pytest.raises(DomainError):
        gammastar_asym(-20.0000001, -21.0)


# --------------------------------------------------------------------------
# hybrid


def test_hybrid_examples():
    assert hybrid_q(100.0, 0.0).value == 1.0
    rep = hybrid_q(100.0, 200.0)
    assert rep.regime is Regime.OUTER_UPPER
    rep = hybrid_q(100.0, 105.0)
    assert rep.regime is Regime.TRANSITION
    assert abs(rep.value - oq(100, 105)) <= 0.5e-10 * oq(100, 105)
    assert hybrid_q(100.0, 20.0).regime is Regime.OUTER_LOWER
    assert hybrid_q(2.0, 3.0).regime is Regime.REFERENCE


@pytest.mark.parametrize("a", [50.0, 500.0, 5000.0])
@pytest.mark.parametrize("side", [1, -1])
def test_regime_continuity(a, side):
    tau = side * 0.9 * a ** (1 / 6)
    x = a + tau * math.sqrt(a)
    t = q_transition(a, tau)
    o = q_outer(a, x)
    assert abs(t.value - o.value) <= 5 * max(t.error_estimate, o.error_estimate)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=5, max_value=1e4), st.floats(min_value=0, max_value=10))
def test_hybrid_in_unit_interval_and_within_estimate(a, ratio):
    rep = hybrid_q(a, a * ratio)
    assert 0.0 <= rep.value <= 1.0
    assert rep.error_estimate >= 0
    # the estimate is the first-neglected-term heuristic; deep truncations at
    # small a can overshoot it by about 1.5x
    assert abs(rep.value - oq(a, a * ratio)) <= 3 * max(rep.error_estimate, 1e-15)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=5, max_value=1e3), st.floats(min_value=0.2, max_value=5), st.floats(min_value=1e-3, max_value=0.5))
def test_hybrid_monotone_in_x(a, r, dr):
    assert hybrid_q(a, a * r).value >= hybrid_q(a, a * (r + dr)).value - 1e-14
