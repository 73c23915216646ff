"""Inverse of Q(a, .) and the negative zero of gamma*(a, .).

Both series are in powers of |a|^(-1/2) with the polynomials d_n.  For the
negative zero they are evaluated along the imaginary axis, where
``(-i)^n d_n(i tau)`` is a real polynomial (see :meth:`RationalPoly.rotate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .coeffs import gen_d
from .exceptions import DomainError, ValidityError
from .expansions import check_negative_order, envelope_truncation, hybrid_q, log_q_prefactor
from .special import SQRT2, dawson, inv_half_erfc

#: Highest d_n index used by the automatic truncation.
D_NMAX = 10
#: Validity guard on |tau| relative to sqrt(|a|).
GUARD = 0.9
#: Residual target for the tau_1 root solve.
TAU1_RESIDUAL = 1e-13

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class QuantileResult:
    """Solution ``x`` of ``Q(a,x) = q``.

    ``error_estimate`` is the envelope of the first omitted terms (in units
    of x) and ``q_error_estimate`` the same pushed through ``dQ/dx``.
    ``residual`` is ``|Q(a,x) - q|`` and only present after verification.
    """

    x: float
    tau0: float
    terms_used: int
    first_neglected: float
    error_estimate: float
    q_error_estimate: float
    residual: float | None = None


@dataclass(frozen=True)
class ZeroResult:
    """Negative zero ``x_-(a)`` of ``gamma*(a, .)``."""

    x_minus: float
    tau1: float
    terms_used: int
    first_neglected: float
    error_estimate: float


def _series(tau: float, scale: float, count: int, rotate: bool) -> list[float]:
    # d_n(tau) scale^n, or (-i)^n d_n(i tau) scale^n when rotate is set
    out = []
    p = 1.0
    for n in range(count):
        poly = gen_d(n).rotate(n) if rotate else gen_d(n)
        out.append(poly.eval_float(tau) * p)
        p *= scale
    return out


def _pick(terms: list[float], N: int | None, base: float) -> tuple[int, float, float]:
    if N is None:
        n = envelope_truncation([abs(t) for t in terms], base)
    else:
        n = N
    first = abs(terms[n]) if n < len(terms) else 0.0
    nxt = abs(terms[n + 1]) if n + 1 < len(terms) else 0.0
    return n, first, max(first, nxt)


def quantile(a: float, q: float, N: int | None = None, verify: bool = False) -> QuantileResult:
    """``x(a,q)`` with ``Q(a,x) = q`` from the inverse transition series.

    ``N=None`` picks the truncation from the terms with ``n <= 10``.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    if N is not None and not 0 <= N:
        raise ValueError("N must be non-negative")
    tau0 = inv_half_erfc(q)
    root = math.sqrt(a)
    if abs(tau0) >= GUARD * root:
        raise ValidityError(
            f"|tau0| = {abs(tau0):.4g} is not below {GUARD}*sqrt(a) = {GUARD * root:.4g}; q is too close to 0 or 1"
        )
    count = D_NMAX + 1 if N is None else N + 2
    terms = _series(tau0, 1.0 / root, count, rotate=False)
    n_used, first, est = _pick(terms, N, a)
    x = math.fsum([a, tau0 * root] + terms[:n_used])
    if not x > 0:
        raise ValidityError(f"series produced non-positive x = {x!r}")
    # |dQ/dx| = x^(a-1) e^-x / Gamma(a)
    density = math.exp(log_q_prefactor(a, x / a)) / x
    residual = abs(hybrid_q(a, x).value - q) if verify else None
    return QuantileResult(x, tau0, n_used, first, est, density * est, residual)


def _cot_pi_neg(a: float) -> float:
    # cot(-pi a) has period 1 in a; reduce first so a = -k - 1/2 gives exactly 0
    f = (-a) % 1.0
    return math.tan(math.pi * (0.5 - f))


def tau1_function(tau: float) -> float:
    """``(2/sqrt(pi)) F(tau/sqrt 2) e^(tau^2/2) = sqrt(2/pi) int_0^tau e^(t^2/2) dt``."""
    return 2.0 / math.sqrt(math.pi) * dawson(tau / SQRT2) * math.exp(0.5 * tau * tau)


def solve_tau1(a: float) -> float:
    """Unique real ``tau_1`` with ``cot(-pi a) = sqrt(2/pi) int_0^tau1 e^(t^2/2) dt``.

    The right side is increasing, so the root is bracketed by doubling and
    then refined by safeguarded Newton steps.
    """
    check_negative_order(a)
    target = _cot_pi_neg(a)
    if target == 0.0:
        return 0.0
    lo, hi = -1.0, 1.0
    while tau1_function(lo) > target:
        lo *= 2.0
    while tau1_function(hi) < target:
        hi *= 2.0
    tau = max(lo, min(hi, math.copysign(math.sqrt(2.0 * math.log1p(abs(target))), target)))
    tol = TAU1_RESIDUAL * max(1.0, abs(target))
    for _ in range(200):
        g = tau1_function(tau) - target
        if abs(g) <= tol:
            break
        if g > 0:
            hi = tau
        else:
            lo = tau
        step = g / (_SQRT_2_OVER_PI * math.exp(0.5 * tau * tau))
        new = tau - step
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        if new == tau:
            break
        tau = new
    return tau


def negative_zero(a: float, N: int | None = None) -> ZeroResult:
    """Negative zero ``x_-(a) = a - tau1 sqrt(-a) + sum (-i)^n d_n(i tau1) (-a)^(-n/2)``."""
    check_negative_order(a)
    if N is not None and N < 0:
        raise ValueError("N must be non-negative")
    tau1 = solve_tau1(a)
    root = math.sqrt(-a)
    if abs(tau1) >= GUARD * root:
        raise ValidityError(f"|tau1| = {abs(tau1):.4g} is not below {GUARD}*sqrt(-a) = {GUARD * root:.4g}")
    count = D_NMAX + 1 if N is None else N + 2
    terms = _series(tau1, 1.0 / root, count, rotate=True)
    n_used, first, est = _pick(terms, N, a)
    x = math.fsum([a, -tau1 * root] + terms[:n_used])
    return ZeroResult(x, tau1, n_used, first, est)


def thompson_approx(a: float) -> float:
    """Thompson's approximation ``a - tau1 sqrt(-a) - tau1^2/3 - 1/3``."""
    tau1 = solve_tau1(a)
    return a - tau1 * math.sqrt(-a) - tau1 * tau1 / 3.0 - 1.0 / 3.0
