"""Floating-point evaluators for the asymptotic expansions of Q(a,z).

Every evaluator returns an :class:`EvalReport`.  Sums are accumulated with
:func:`math.fsum`, and coefficient polynomials are evaluated exactly at the
binary64 argument (see :meth:`RationalPoly.eval_float`), so the only rounding
left is in the prefactors.

Truncation
----------
``optimal_truncation`` is the plain "first local minimum" rule.  The
transition series in powers of ``a^(-1/2)`` has a parity structure: at small
``tau`` every other odd-index term is tiny, and the first local minimum lands
on one of those long before the series has converged.  The automatic choice
for that series therefore minimises the two-term envelope
``max(|t_n|, |t_(n+1)|)`` instead, and the same envelope is reported as the
error estimate.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import mpmath

from . import oracle
from .coeffs import gen_a, gen_b, gen_C, gen_f_table, stirling_gamma
from .exceptions import DegenerateExpansionError, DomainError
from .special import SQRT2, dawson, erfc, log_scaled_gamma

SQRT_2PI = math.sqrt(2.0 * math.pi)

#: Series lengths generated when the caller lets the evaluator choose N.
TRANSITION_NMAX = 60
UNIFORM_NMAX = 30
OUTER_NMAX = 80

#: Terms below this fraction of the running value are treated as converged.
_CONVERGED = 2.0**-56
_EPS = 2.0**-53

#: Dispatch threshold: the transition series is used for |tau| <= 0.9 a^(1/6).
TRANSITION_FACTOR = 0.9
#: Below this a the hybrid evaluator falls back to the reference algorithm.
REFERENCE_BELOW = 5.0


class Regime(str, Enum):
    OUTER_LOWER = "OuterLower"
    OUTER_UPPER = "OuterUpper"
    OUTER_NEGATIVE = "OuterNegative"
    TRANSITION_POINT = "TransitionPoint"
    TRANSITION = "Transition"
    UNIFORM = "Uniform"
    REFERENCE = "Reference"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EvalReport:
    """Value of a truncated expansion together with its error heuristics.

    ``first_neglected`` is the magnitude of term ``terms_used`` and
    ``error_estimate`` the quantity callers should compare errors against.
    Outer evaluators of unnormalised functions also fill ``log_magnitude``
    and ``sign`` so that values beyond the binary64 range stay usable.
    """

    value: float
    terms_used: int
    first_neglected: float
    regime: Regime
    error_estimate: float
    log_magnitude: float | None = None
    sign: int | None = None
    warning: str | None = None


# --------------------------------------------------------------------------
# truncation rules


def optimal_truncation(terms: Sequence[float], window: int = 1) -> int:
    """Index of the first local minimum of ``|terms|``.

    A term counts as a local minimum when no term within ``window`` places
    on either side is smaller; ties go to the smaller index.  When the
    magnitudes keep decreasing to the end, the last index is returned.
    """
    mags = [abs(t) for t in terms]
    if not mags:
        raise ValueError("need at least one term")
    n = len(mags)
    for i in range(n - 1):
        lo, hi = max(0, i - window), min(n, i + window + 1)
        if i + window >= n:
            break
        if all(mags[i] <= mags[j] for j in range(lo, hi)):
            return i
    return n - 1


def _envelope(mags: Sequence[float]) -> list[float]:
    return [max(mags[i], mags[i + 1]) for i in range(len(mags) - 1)]


def envelope_truncation(mags: Sequence[float], scale: float) -> int:
    """Truncation index minimising ``max(|t_n|, |t_(n+1)|)``.

    Stops at the first index whose envelope is negligible against ``scale``
    (the series has converged to working precision); otherwise returns the
    index of the least envelope value over the whole sequence.
    """
    env = _envelope(mags)
    if not env:
        return 0
    for i, e in enumerate(env):
        if e <= _CONVERGED * abs(scale):
            return i
    return min(range(len(env)), key=lambda i: (env[i], i))


def _first_local_truncation(mags: Sequence[float], scale: float) -> int:
    for i, m in enumerate(mags):
        if m <= _CONVERGED * abs(scale):
            return i
    return optimal_truncation(mags)


# --------------------------------------------------------------------------
# transition region: Q(a, a + tau sqrt(a))


def transition_terms(a: float, tau: float, count: int) -> list[float]:
    """Signed terms ``(2 pi a)^(-1/2) e^(-tau^2/2) C_n(tau) a^(-n/2)``, ``n < count``."""
    pref = math.exp(-0.5 * tau * tau) / (SQRT_2PI * math.sqrt(a))
    r = 1.0 / math.sqrt(a)
    out = []
    scale = pref
    for n in range(count):
        out.append(scale * gen_C(n).eval_float(tau))
        scale *= r
    return out


def q_transition(a: float, tau: float, N: int | None = None) -> EvalReport:
    """``Q(a, a + tau sqrt(a))`` from the transition-region expansion.

    With ``N=None`` the truncation is chosen by :func:`envelope_truncation`
    over the first ``TRANSITION_NMAX`` terms.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if a + tau * math.sqrt(a) <= 0:
        raise DomainError("z = a + tau*sqrt(a) must be positive")
    lead = 0.5 * erfc(tau / SQRT2)
    if N is not None:
        if N < 0:
            raise ValueError("N must be non-negative")
        terms = transition_terms(a, tau, N + 2)
        n_used = N
    else:
        terms = transition_terms(a, tau, TRANSITION_NMAX + 1)
        n_used = envelope_truncation([abs(t) for t in terms], max(lead, abs(terms[0])))
    value = math.fsum([lead] + terms[:n_used])
    first = abs(terms[n_used])
    est = max(first, abs(terms[n_used + 1]))
    return EvalReport(value, n_used, first, Regime.TRANSITION, est)


# --------------------------------------------------------------------------
# uniform expansion


def lambda_excess(lam: float) -> float:
    """``lam - 1 - log(lam)`` without cancellation near ``lam = 1``."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    mu = lam - 1.0
    if mu == 0.0:
        return 0.0
    if lam < 0.5:
        # mu may round to -1 for tiny lam; log(lam) carries the information
        return mu - math.log(lam)
    if abs(mu) >= 0.1:
        return mu - math.log1p(mu)
    # sum_{k>=2} (-mu)^k / k
    terms = []
    p = mu * mu
    k = 2
    while True:
        t = p / k if k % 2 == 0 else -p / k
        terms.append(t)
        if abs(t) <= 1e-18 * abs(terms[0]):
            break
        p *= mu
        k += 1
    return math.fsum(terms)


def eta_of_lambda(lam: float) -> float:
    """Real branch ``eta = sign(lam-1) sqrt(2(lam - 1 - log lam))``."""
    return math.copysign(math.sqrt(2.0 * lambda_excess(lam)), lam - 1.0)


_ETA_SWITCH = 0.5
_SERIES_ROWS = 40

_float_cols: list[list[float]] = []
_closed: list[dict[tuple[int, int, int], Fraction]] = []
_uniform_lock = threading.Lock()


def _f_column(n: int) -> list[float]:
    with _uniform_lock:
        if len(_float_cols) <= n:
            n_max = max(n, UNIFORM_NMAX)
            table = gen_f_table(_SERIES_ROWS + 2 * n_max, n_max)
            _float_cols[:] = [[float(v) for v in table.column(m)[: _SERIES_ROWS + 1]] for m in range(n_max + 1)]
        return _float_cols[n]


def _closed_form(n: int) -> dict[tuple[int, int, int], Fraction]:
    # c_n as sum coef * lam^i mu^j eta^k with mu = lam - 1; the operator
    # (1/eta) d/deta equals (lam/mu) d/dlam and acts termwise as
    # lam^i mu^j eta^k -> i lam^i mu^(j-1) eta^k + j lam^(i+1) mu^(j-2) eta^k + k lam^i mu^j eta^(k-2)
    with _uniform_lock:
        if not _closed:
            _closed.append({(0, -1, 0): Fraction(1), (0, 0, -1): Fraction(-1)})
        while len(_closed) <= n:
            m = len(_closed)
            out: dict[tuple[int, int, int], Fraction] = {}

            def add(key, c):
                v = out.get(key, 0) + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)

            for (i, j, k), c in _closed[-1].items():
                if i:
                    add((i, j - 1, k), i * c)
                if j:
                    add((i + 1, j - 2, k), j * c)
                if k:
                    add((i, j, k - 2), k * c)
            add((0, -1, 0), stirling_gamma(m))
            _closed.append(out)
        return _closed[n]


def _lambda_of_eta(eta: float) -> float:
    # Newton on eta^2/2 = lam - 1 - log(lam) on the branch sign(lam - 1) = sign(eta)
    target = 0.5 * eta * eta
    lam = 1.0 + eta if eta > 0 else math.exp(-target - 1.0) if eta < -1.5 else max(1.0 + eta, 1e-3)
    for _ in range(100):
        g = lam - 1.0 - math.log(lam) - target
        step = g / (1.0 - 1.0 / lam)
        new = lam - step
        if eta < 0 and new <= 0:
            new = lam / 2
        if abs(new - lam) <= 1e-16 * lam:
            lam = new
            break
        lam = new
    return lam


def uniform_coefficient(n: int, eta: float, lam: float | None = None) -> float:
    """``c_n(eta)``.

    Inside ``|eta| <= 0.5`` the eta-power series is summed; outside, the
    closed form is evaluated in extended precision because its terms cancel.
    """
    if abs(eta) <= _ETA_SWITCH:
        col = _f_column(n)
        acc = 0.0
        for c in reversed(col):
            acc = acc * eta + c
        return acc
    if lam is None:
        lam = _lambda_of_eta(eta)
    form = _closed_form(n)
    with mpmath.workdps(40 + 3 * n):
        # eta is recomputed from lam here: the float eta is only consistent
        # with lam to binary64 precision and the closed form amplifies that
        L = mpmath.mpf(lam)
        M = L - 1
        E = mpmath.sqrt(2 * (M - mpmath.log(L)))
        if M < 0:
            E = -E
        total = mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator * L**i * M**j * E**k for (i, j, k), c in form.items()
        )
        return float(total)


def uniform_terms(a: float, lam: float, count: int) -> list[float]:
    eta = eta_of_lambda(lam)
    pref = math.exp(-0.5 * eta * eta * a) / (SQRT_2PI * math.sqrt(a))
    out = []
    scale = pref
    for n in range(count):
        out.append(scale * uniform_coefficient(n, eta, lam))
        scale /= a
    return out


def q_uniform(a: float, lam: float, N: int | None = None) -> EvalReport:
    """``Q(a, lam*a)`` from the uniform expansion.

    With ``N=None`` the series is cut at :func:`optimal_truncation` of the
    first ``UNIFORM_NMAX`` terms.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    eta = eta_of_lambda(lam)
    lead = 0.5 * erfc(eta * math.sqrt(a) / SQRT2)
    if N is not None:
        if N < 0:
            raise ValueError("N must be non-negative")
        terms = uniform_terms(a, lam, N + 1)
        n_used = N
    else:
        terms = uniform_terms(a, lam, UNIFORM_NMAX + 1)
        n_used = _first_local_truncation([abs(t) for t in terms[:-1]], max(lead, abs(terms[0])))
    value = math.fsum([lead] + terms[:n_used])
    first = abs(terms[n_used])
    # erfc(eta sqrt(a/2)) and exp(-eta^2 a/2) magnify the rounding of their arguments
    scale = abs(lead) + math.fsum(abs(t) for t in terms[:n_used])
    est = first + rounding_floor(0.5 * eta * eta * a, scale)
    return EvalReport(value, n_used, first, Regime.UNIFORM, est)


# --------------------------------------------------------------------------
# outer expansions


def _exp_signed(log_mag: float, sign: int) -> float:
    try:
        return sign * math.exp(log_mag)
    except OverflowError:
        return sign * math.inf


def _outer_series(a: float, lam: float, shift: float, count: int, negative: bool) -> list[float]:
    # terms (-a)^n b_n(lam) / shift^(2n+1); for the negative-order form a^n b_n(-lam)
    out = []
    step = (a if negative else -a) / (shift * shift)
    scale = 1.0 / shift
    arg = -lam if negative else lam
    for n in range(count):
        out.append(scale * gen_b(n).eval_float(arg))
        scale *= step
    return out


def rounding_floor(log_pref: float, value: float, n_terms: int = 1) -> float:
    """Rounding allowance for ``exp(log_pref) * S`` formed in binary64.

    The absolute error of ``log_pref`` is about ``eps*|log_pref|``, which
    becomes a relative error of the exponential.
    """
    return 4.0 * _EPS * (abs(log_pref) + n_terms + 1.0) * abs(value)


def _outer_report(log_pref: float, terms: list[float], N: int | None, sign_out: int, regime: Regime) -> EvalReport:
    if N is None:
        n_used = _first_local_truncation([abs(t) for t in terms[:-1]], abs(terms[0]))
    else:
        n_used = N
    s = sign_out * math.fsum(terms[:n_used])
    first_rel = abs(terms[n_used])
    first = _exp_signed(log_pref + math.log(first_rel), 1) if first_rel else 0.0
    if s == 0:
        return EvalReport(0.0, n_used, first, regime, first, -math.inf, 0)
    log_mag = log_pref + math.log(abs(s))
    sign = 1 if s > 0 else -1
    value = _exp_signed(log_mag, sign)
    est = first + rounding_floor(log_pref, value, n_used)
    return EvalReport(value, n_used, first, regime, est, log_mag, sign)


def _check_outer(a: float, z: float, N: int | None):
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    if N is not None and N < 0:
        raise ValueError("N must be non-negative")


def gamma_outer_upper(a: float, z: float, N: int | None = None) -> EvalReport:
    """``Gamma(a,z)`` from Tricomi's expansion, ``z > a``."""
    _check_outer(a, z, N)
    if not z > a:
        raise DomainError("the upper outer expansion needs z > a")
    if abs(z - a) <= math.sqrt(a):
        raise DegenerateExpansionError("|z - a| <= sqrt(a): use the transition expansion")
    count = OUTER_NMAX + 1 if N is None else N + 1
    terms = _outer_series(a, z / a, z - a, count, negative=False)
    return _outer_report(a * math.log(z) - z, terms, N, 1, Regime.OUTER_UPPER)


def gamma_outer_lower(a: float, z: float, N: int | None = None) -> EvalReport:
    """``gamma(a,z)`` from Mahler's expansion, ``0 < z < a``."""
    _check_outer(a, z, N)
    if not z < a:
        raise DomainError("the lower outer expansion needs z < a")
    if abs(z - a) <= math.sqrt(a):
        raise DegenerateExpansionError("|z - a| <= sqrt(a): use the transition expansion")
    count = OUTER_NMAX + 1 if N is None else N + 1
    terms = _outer_series(a, z / a, z - a, count, negative=False)
    return _outer_report(a * math.log(z) - z, terms, N, -1, Regime.OUTER_LOWER)


def gamma_outer_neg(a: float, z: float, N: int | None = None) -> EvalReport:
    """``Gamma(-a,z)`` from Gautschi's expansion, ``a > 0``, ``z > 0``."""
    _check_outer(a, z, N)
    if abs(z + a) <= math.sqrt(a):
        raise DegenerateExpansionError("|z + a| <= sqrt(a): expansion has no decreasing terms")
    count = OUTER_NMAX + 1 if N is None else N + 1
    terms = _outer_series(a, z / a, z + a, count, negative=True)
    return _outer_report(-a * math.log(z) - z, terms, N, 1, Regime.OUTER_NEGATIVE)


# --------------------------------------------------------------------------
# transition point z ~ a


def gamma_transition_point(a: float, z: float, N: int = 3) -> EvalReport:
    """``Gamma(a,z)`` for bounded ``eps = z - a``.

    Sums ``N`` terms of each of the two series in ``1/z``.  A warning is
    issued (and recorded on the report) when ``|eps| > z^(1/4)``.
    """
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    if N < 0:
        raise ValueError("N must be non-negative")
    eps = z - a
    note = None
    if abs(eps) > z**0.25:
        note = f"|eps| = {abs(eps):.3g} exceeds z^(1/4) = {z ** 0.25:.3g}; outside the intended range"
        warnings.warn(note, RuntimeWarning, stacklevel=2)
    root = math.sqrt(math.pi / (2.0 * z))
    even = [root * gen_a(2 * n).eval_float(eps) * z**-n for n in range(N + 1)]
    odd = [-gen_a(2 * n + 1).eval_float(eps) * z ** (-n - 1) for n in range(N + 1)]
    s = math.fsum(even[:N] + odd[:N])
    log_pref = a * math.log(z) - z
    first_rel = max(abs(even[N]), abs(odd[N]))
    sign = 1 if s >= 0 else -1
    log_mag = log_pref + math.log(abs(s)) if s else -math.inf
    first = _exp_signed(log_pref + math.log(first_rel), 1) if first_rel else 0.0
    value = _exp_signed(log_mag, sign)
    est = first + rounding_floor(log_pref, value, 2 * N)
    return EvalReport(value, N, first, Regime.TRANSITION_POINT, est, log_mag, sign, note)


# --------------------------------------------------------------------------
# gamma* for negative a


def _near_nonpositive_integer(a: float, tol: float = 1e-6) -> bool:
    return a <= tol and abs(a - round(a)) < tol


def check_negative_order(a: float) -> None:
    if not a < 0:
        raise DomainError(f"a must be negative, got {a!r}")
    if _near_nonpositive_integer(a):
        raise DomainError(f"a = {a!r} is within 1e-6 of a non-positive integer")


def rotated_transition_terms(a: float, tau: float, count: int) -> list[float]:
    """Real numbers ``(-i)^n C_n(i tau) (-a)^(-n/2)``, ``n < count``, for ``a < 0``."""
    r = 1.0 / math.sqrt(-a)
    out = []
    scale = 1.0
    for n in range(count):
        out.append(scale * gen_C(n).rotate(n).eval_float(tau))
        scale *= r
    return out


def gammastar_asym(a: float, x: float, N: int = 6) -> EvalReport:
    """Approximation to ``(-x)^a gamma*(a,x)`` for negative ``a`` and ``x``.

    ``tau = (a - x)/sqrt(-a)``; the value is
    ``cos(pi a) + sin(pi a)/pi * (2 sqrt(pi) F(tau/sqrt 2) + sqrt(2 pi/-a) S) e^(tau^2/2)``
    with ``S`` the rotated transition series.
    """
    check_negative_order(a)
    if N < 0:
        raise ValueError("N must be non-negative")
    tau = (a - x) / math.sqrt(-a)
    terms = rotated_transition_terms(a, tau, N + 1)
    s = math.fsum(terms[:N])
    grow = math.exp(0.5 * tau * tau)
    sp = math.sin(math.pi * a) / math.pi
    bracket = 2.0 * math.sqrt(math.pi) * dawson(tau / SQRT2) + math.sqrt(2.0 * math.pi / -a) * s
    value = math.cos(math.pi * a) + sp * bracket * grow
    first = abs(sp * math.sqrt(2.0 * math.pi / -a) * terms[N] * grow)
    return EvalReport(value, N, first, Regime.TRANSITION, first)


# --------------------------------------------------------------------------
# hybrid dispatcher


def log_q_prefactor(a: float, lam: float) -> float:
    """``log(z^a e^-z / Gamma(a))`` with ``z = lam*a``, free of large cancellations."""
    return -a * lambda_excess(lam) + 0.5 * math.log(a / (2.0 * math.pi)) - log_scaled_gamma(a)


def q_outer(a: float, x: float, N: int | None = None) -> EvalReport:
    """``Q(a,x)`` from the outer expansion on the side of ``x`` relative to ``a``.

    ``x > a`` uses ``Gamma(a,x)/Gamma(a)``, ``x < a`` uses ``1 - gamma(a,x)/Gamma(a)``.
    The normalisation goes through :func:`log_q_prefactor`, so no large
    logarithms cancel.
    """
    _check_outer(a, x, N)
    if abs(x - a) <= math.sqrt(a):
        raise DegenerateExpansionError("|x - a| <= sqrt(a): use the transition expansion")
    lam = x / a
    count = OUTER_NMAX + 1 if N is None else N + 1
    terms = _outer_series(a, lam, x - a, count, negative=False)
    if N is None:
        n_used = _first_local_truncation([abs(t) for t in terms[:-1]], abs(terms[0]))
    else:
        n_used = N
    s = math.fsum(terms[:n_used])
    log_pref = log_q_prefactor(a, lam)
    scale = math.exp(log_pref) if log_pref > -745 else 0.0
    part = scale * s
    first = scale * abs(terms[n_used])
    est = first + rounding_floor(log_pref, part, n_used)
    if x > a:
        value, regime = part, Regime.OUTER_UPPER
    else:
        value, regime = 1.0 + part, Regime.OUTER_LOWER
    return EvalReport(min(1.0, max(0.0, value)), n_used, first, regime, est)


def hybrid_q(a: float, x: float) -> EvalReport:
    """``Q(a,x)`` choosing between the transition and outer expansions.

    ``tau = (x-a)/sqrt(a)``.  For ``|tau| <= 0.9 a^(1/6)`` the transition
    series is used; otherwise the appropriate outer expansion, normalised
    by ``Gamma(a)`` in logarithmic form.  ``a < 5`` goes to the reference
    algorithm.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if not x >= 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x == 0:
        return EvalReport(1.0, 0, 0.0, Regime.REFERENCE, 0.0)
    if a < REFERENCE_BELOW:
        value = float(oracle.oracle_q(a, x, prec=64))
        return EvalReport(value, 0, 0.0, Regime.REFERENCE, 2.0**-52 * value)
    tau = (x - a) / math.sqrt(a)
    if abs(tau) <= TRANSITION_FACTOR * a ** (1.0 / 6.0):
        rep = q_transition(a, tau)
        value = min(1.0, max(0.0, rep.value))
        return EvalReport(value, rep.terms_used, rep.first_neglected, rep.regime, rep.error_estimate)
    return q_outer(a, x)
