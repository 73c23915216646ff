"""Scalar special functions in binary64: erfc, its half-inverse, Dawson, Gamma*."""

from __future__ import annotations

import math
from statistics import NormalDist

from .coeffs import bernoulli
from .exceptions import DomainError

SQRT2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)
_STD_NORMAL = NormalDist()


def erfc(x: float) -> float:
    """Complementary error function (libm ``erfc``)."""
    return math.erfc(x)


def inv_half_erfc(q: float) -> float:
    """Solve ``0.5*erfc(t/sqrt(2)) = q`` for ``t``.

    The rational initial guess from the normal quantile is polished by
    Newton steps on ``0.5*erfc(t/sqrt 2) - q`` (derivative
    ``-exp(-t^2/2)/sqrt(2 pi)``) until the step stalls.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    if q == 0.5:
        return 0.0
    # 0.5*erfc(t/sqrt 2) = Phi(-t), so t = -Phi^{-1}(q)
    t = -_STD_NORMAL.inv_cdf(q)
    for _ in range(60):
        resid = 0.5 * math.erfc(t / SQRT2) - q
        slope = -math.exp(-0.5 * t * t) / SQRT_2PI
        if slope == 0.0:
            break
        step = resid / slope
        t -= step
        if abs(step) <= 1e-16 * max(1.0, abs(t)):
            break
    return t


# Dawson's integral F(x) = exp(-x^2) int_0^x exp(t^2) dt.
# |x| <= 6.5: positive series sum x^(2n+1)/(n!(2n+1)) times exp(-x^2) (no cancellation);
# beyond: asymptotic 1/(2x) sum (2n-1)!!/(2x^2)^n, whose least term is ~exp(-x^2).
_DAWSON_SWITCH = 6.5


def dawson(x: float) -> float:
    """Dawson's integral ``F(x)``."""
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if ax <= _DAWSON_SWITCH:
        x2 = ax * ax
        term = ax  # x^(2n+1)/n!
        terms = [ax]
        n = 0
        while True:
            n += 1
            term *= x2 / n
            contrib = term / (2 * n + 1)
            terms.append(contrib)
            if contrib <= 1e-17 * terms[0] and n > x2:
                break
        value = math.fsum(terms) * math.exp(-x2)
    else:
        inv = 1.0 / (2.0 * ax * ax)
        term = 1.0
        terms = [1.0]
        n = 0
        while True:
            n += 1
            nxt = term * (2 * n - 1) * inv
            if nxt >= term or nxt < 1e-17:
                break
            term = nxt
            terms.append(term)
        value = math.fsum(terms) / (2.0 * ax)
    return math.copysign(value, x)


_STIRLING_LOG = [float(bernoulli(2 * k) / (2 * k * (2 * k - 1))) for k in range(1, 11)]
_STIRLING_SWITCH = 8.0


def log_scaled_gamma(a: float) -> float:
    """``log Gamma*(a)`` for ``a > 0``."""
    if not a > 0.0:
        raise DomainError(f"scaled gamma needs a > 0, got {a!r}")
    shift = 0.0
    # Gamma*(a) = Gamma*(a+1) * exp(-1) * (1 + 1/a)^(a + 1/2)
    while a < _STIRLING_SWITCH:
        shift += (a + 0.5) * math.log1p(1.0 / a) - 1.0
        a += 1.0
    inv = 1.0 / a
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING_LOG):
        acc = acc * inv2 + c
    return shift + acc * inv


def scaled_gamma(a: float) -> float:
    """Scaled gamma ``Gamma*(a) = Gamma(a) e^a a^(1/2-a) / sqrt(2 pi)``."""
    return math.exp(log_scaled_gamma(a))


def log_gamma(a: float) -> float:
    """``log Gamma(a)`` through the scaled form, accurate for large ``a``."""
    return (a - 0.5) * math.log(a) - a + 0.5 * math.log(2 * math.pi) + log_scaled_gamma(a)
