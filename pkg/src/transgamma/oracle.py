"""Extended-precision reference values.

Only convergent algorithms live here: the power series for the lower
function, the Legendre continued fraction for the upper one, the entire
series for gamma*, and a trapezoidal contour sum for coefficients.
Arithmetic is :mod:`mpmath` at a caller-chosen binary precision (192 bits by
default); every public function takes and returns ``mpmath.mpf`` values
(plain floats and ints are accepted as inputs).
"""

from __future__ import annotations

import math

import mpmath
from mpmath import mp

from .exceptions import ConvergenceError, DomainError

DEFAULT_PREC = 192
MAX_TERMS = 10**6
TINY_EXP = -60  # modified-Lentz substitution value is 10^TINY_EXP


def _to_mpf(v):
    if isinstance(v, str):
        return mpmath.mpf(v)
    return mpmath.mpf(v)


def _round(v, prec: int):
    # unary plus rounds to the context precision, so set it explicitly; outside
    # a workprec block it would be the 53-bit default
    with mp.workprec(prec):
        return +v


def _tolerance(prec: int):
    # stop when the relative update drops below 2^-prec scaled by 10^5
    return mpmath.mpf(2) ** (-prec) * 10**5


def _lower_series(a, x, prec: int):
    """sum_{n>=0} x^n / ((a+1)...(a+n)), the series of gamma(a,x) x^-a e^x Gamma(a+1)... normalised."""
    tol = _tolerance(prec)
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    for n in range(1, MAX_TERMS):
        term = term * x / (a + n)
        total += term
        if abs(term) < tol * abs(total):
            return total
    raise ConvergenceError("lower series did not converge")


def _upper_cf(a, x, prec: int):
    """Continued fraction for Gamma(a,x) x^-a e^x by the modified Lentz method."""
    tol = _tolerance(prec)
    tiny = mpmath.mpf(10) ** TINY_EXP
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b if b != 0 else 1 / tiny
    h = d
    for i in range(1, MAX_TERMS):
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < tol:
            return h
    raise ConvergenceError("continued fraction did not converge")


def _pq(a, x, prec: int):
    """(P(a,x), Q(a,x)) for a > 0, x >= 0 at the current working precision."""
    if x == 0:
        return mpmath.mpf(0), mpmath.mpf(1)
    log_pref = a * mpmath.log(x) - x
    if x <= a + 1:
        s = _lower_series(a, x, prec)
        p = mpmath.exp(log_pref - mpmath.loggamma(a + 1)) * s
        return p, 1 - p
    h = _upper_cf(a, x, prec)
    q = mpmath.exp(log_pref - mpmath.loggamma(a)) * h
    return 1 - q, q


def oracle_q(a, x, prec: int = DEFAULT_PREC):
    """Normalised upper incomplete gamma ``Q(a,x)``, ``a > 0``, ``x >= 0``."""
    with mp.workprec(prec + 32):
        a, x = _to_mpf(a), _to_mpf(x)
        if not a > 0 or x < 0:
            raise DomainError("oracle_q needs a > 0 and x >= 0")
        p, q = _pq(a, x, prec)
    return _round(q, prec)


def oracle_p(a, x, prec: int = DEFAULT_PREC):
    """Normalised lower incomplete gamma ``P(a,x) = 1 - Q(a,x)``."""
    with mp.workprec(prec + 32):
        a, x = _to_mpf(a), _to_mpf(x)
        if not a > 0 or x < 0:
            raise DomainError("oracle_p needs a > 0 and x >= 0")
        p, q = _pq(a, x, prec)
    return _round(p, prec)


def oracle_gamma_upper(a, x, prec: int = DEFAULT_PREC):
    """Non-normalised ``Gamma(a,x)`` for real ``a`` and ``x > 0``.

    For ``a > 0`` this is ``Q(a,x) Gamma(a)``.  For ``a <= 0`` the value is
    started at ``s = a + m > 0`` and carried down with
    ``Gamma(s,x) = (Gamma(s+1,x) - x^s e^-x) / s``.
    """
    a, x = _to_mpf(a), _to_mpf(x)
    if not x > 0:
        raise DomainError("oracle_gamma_upper needs x > 0")
    m = 0 if a > 0 else int(math.floor(-float(a))) + 1
    # the downward recurrence may cancel; carry extra bits proportional to the steps
    guard = 32 + 4 * m + int(float(abs(x)))
    with mp.workprec(prec + guard):
        s = a + m
        if m and s == 1 and a == int(a):
            # integer a <= 0: descend from Gamma(0,x) = E1(x) via the continued fraction
            s = mpmath.mpf(0)
            value = mpmath.exp(-x) * _upper_cf(s, x, prec + guard)
            m -= 1
        else:
            _, q = _pq(s, x, prec + guard)
            value = q * mpmath.gamma(s)
        while m:
            s -= 1
            value = (value - mpmath.power(x, s) * mpmath.exp(-x)) / s
            m -= 1
    return _round(value, prec)


def oracle_gamma_lower(a, x, prec: int = DEFAULT_PREC):
    """Non-normalised ``gamma(a,x) = P(a,x) Gamma(a)`` for ``a > 0``."""
    with mp.workprec(prec + 32):
        a, x = _to_mpf(a), _to_mpf(x)
        p, _ = _pq(a, x, prec)
        value = p * mpmath.gamma(a)
    return _round(value, prec)


def oracle_gamma(a, prec: int = DEFAULT_PREC):
    """Complete gamma function."""
    with mp.workprec(prec + 32):
        value = mpmath.gamma(_to_mpf(a))
    return _round(value, prec)


def oracle_gammastar(a, x, prec: int = DEFAULT_PREC):
    """Entire function ``gamma*(a,x) = e^-x sum_n x^n / Gamma(a+n+1)``.

    Valid for every real ``a`` and ``x``; terms with a non-positive integer
    ``a+n+1`` vanish.  Negative ``x`` makes the series alternate with terms
    of size up to ``e^|x|``, so the working precision is raised to match.
    """
    a, x = _to_mpf(a), _to_mpf(x)
    ax = abs(float(x))
    guard = 64 + int(3 * ax) + int(2 * abs(float(a)))
    with mp.workprec(prec + guard):
        tol = _tolerance(prec)
        n0 = 0
        if a == int(a) and a < 0:
            n0 = int(-a)  # 1/Gamma(a+n+1) = 0 for n < -a
        term = mpmath.power(x, n0) * mpmath.rgamma(a + n0 + 1)
        total = term
        peak = abs(term)
        n = n0
        while True:
            n += 1
            if n - n0 > MAX_TERMS:
                raise ConvergenceError("gamma* series did not converge")
            term = term * x / (a + n)
            total += term
            peak = max(peak, abs(term))
            if n > ax and abs(term) < tol * abs(total) and abs(term) < tol * peak:
                break
        value = mpmath.exp(-x) * total
    return _round(value, prec)


def oracle_c_contour(n: int, lam, r: float = 0.5, M: int = 64, prec: int = DEFAULT_PREC):
    """Trapezoidal-rule value of ``c_n(eta(lam))`` on the circle ``|t - 1| = r``.

    ``c_n ~ Gamma(n+1/2)/(2M sqrt(2 pi)) sum_{m=1-M}^{M}
    sqrt(w^2/(w - log(w+1))) / ((lam - w - 1) (log(w+1) - w)^n)`` with
    ``w = r exp(i pi m / M)``.  Returns the real part.
    """
    if not 0 < r < 1:
        raise ValueError("radius must satisfy 0 < r < 1")
    if M < 8 or n < 0:
        raise ValueError("need M >= 8 and n >= 0")
    with mp.workprec(prec + 32):
        lam = _to_mpf(lam)
        if not abs(lam - 1) < r:
            raise ValueError(f"|lam - 1| = {float(abs(lam - 1))} must be below r = {r}")
        r = _to_mpf(r)
        total = mpmath.mpc(0)
        for m in range(1 - M, M + 1):
            w = r * mpmath.expj(mpmath.pi * m / M)
            log1w = mpmath.log(w + 1)
            root = mpmath.sqrt(w * w / (w - log1w))
            total += root / ((lam - w - 1) * (log1w - w) ** n)
        value = mpmath.gamma(n + mpmath.mpf(0.5)) / (2 * M * mpmath.sqrt(2 * mpmath.pi)) * total
    return _round(value.real, prec)


def to_float(v) -> float:
    return float(v)


def format_digits(v, digits: int = 25) -> str:
    """Decimal string with ``digits`` significant digits."""
    return mpmath.nstr(v, digits, strip_zeros=False, min_fixed=-5, max_fixed=5)


def agreeing_digits(approx, exact) -> float:
    """Number of significant digits of ``exact`` that ``approx`` gets right.

    The largest ``d`` with ``|approx - exact| <= 0.5 * 10^(e - d + 1)``,
    where ``e`` is the decimal exponent of ``exact``.
    """
    exact = _to_mpf(exact)
    err = abs(_to_mpf(approx) - exact)
    if exact == 0:
        raise DomainError("digits are undefined for a zero reference value")
    if err == 0:
        return math.inf
    e = int(mpmath.floor(mpmath.log10(abs(exact))))
    return int(mpmath.floor(e + 1 - mpmath.log10(2 * err)))
