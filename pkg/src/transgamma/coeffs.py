"""Exact generation of every coefficient family used by the evaluators.

All arithmetic is in :class:`fractions.Fraction`; nothing here touches a
float.  Families are generated lazily and memoised in append-only caches,
guarded by a lock so concurrent readers never observe a half-built entry.

Families
--------
``b_n(lam)``   outer-expansion polynomials, degree n.
``a_n(eps)``   transition-point polynomials, degree n.
``C_n(tau)``   transition-region polynomials, degree 3n+2.
``e_{k,n}``    Taylor coefficients of the uniform-expansion c_n in powers of lam-1.
``f_{k,n}``    the same in powers of eta.
``P_k(t0)``    Taylor coefficients of the inversion function E about t0.
``d_n(t0)``    inverse-function polynomials, degree n+2.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Sequence

from .exceptions import FrontierError
from .polynomial import (
    RationalPoly,
    series_derivative,
    series_exp,
    series_mul,
    series_pow,
)

#: Hard cap on the number of Taylor rows a series table may hold.
TABLE_BUDGET = 2000

_lock = threading.RLock()

X = RationalPoly([0, 1])
ONE = RationalPoly([1])


# --------------------------------------------------------------------------
# Bernoulli numbers


_bernoulli: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Bernoulli number ``B_n`` with the ``B_1 = -1/2`` convention."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        while len(_bernoulli) <= n:
            m = len(_bernoulli)
            acc = sum(math.comb(m + 1, j) * _bernoulli[j] for j in range(m))
            _bernoulli.append(-acc / (m + 1))
        return _bernoulli[n]


# --------------------------------------------------------------------------
# b_n(lambda)


_b: list[RationalPoly] = [ONE]


def gen_b(n: int) -> RationalPoly:
    """Outer-expansion polynomial ``b_n(lam)``.

    Built with ``b_k = lam(1-lam) b'_{k-1} + (2k-1) lam b_{k-1}``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        lam_one_minus = RationalPoly([0, 1, -1])
        while len(_b) <= n:
            k = len(_b)
            prev = _b[-1]
            _b.append(lam_one_minus * prev.derivative() + (2 * k - 1) * (X * prev))
        return _b[n]


# --------------------------------------------------------------------------
# a_n(epsilon)


_a: list[RationalPoly] = []


def _reverted_t(order: int) -> list[Fraction]:
    """Coefficients of t(s) with e^t - t - 1 = s^2/2, through s^order.

    Lagrange inversion of s = t*sqrt(w(t)), w = 2(e^t - t - 1)/t^2, gives
    [s^j] t = (1/j) [t^(j-1)] w^(-j/2).
    """
    w = [Fraction(2, math.factorial(k + 2)) for k in range(order + 1)]
    t = [Fraction(0)]
    for j in range(1, order + 1):
        t.append(series_pow(w, Fraction(-j, 2), j)[j - 1] / j)
    return t


def gen_a(n: int) -> RationalPoly:
    """Transition-point polynomial ``a_n(eps)``.

    Watson's lemma applied to
    ``int_0^inf exp(-z s^2/2) exp(-eps t(s)) t'(s) ds`` turns the Taylor
    coefficient ``g_j`` of the integrand into
    ``a_2m = (2m-1)!! g_2m`` and ``a_2m+1 = -2^m m! g_2m+1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        if len(_a) <= n:
            order = n + 1
            t = _reverted_t(order + 1)
            # exp(-eps * t(s)) with polynomial-in-eps coefficients
            exponent = [RationalPoly([0, -c]) for c in t[: order + 1]]
            g = series_mul(series_exp(exponent, order + 1), series_derivative(t), order + 1)
            _a.clear()
            for j in range(order):
                gj = g[j] if isinstance(g[j], RationalPoly) else RationalPoly([g[j]])
                m = j // 2
                if j % 2 == 0:
                    _a.append(gj * _double_factorial(2 * m - 1))
                else:
                    _a.append(gj * (-(2**m) * math.factorial(m)))
        return _a[n]


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# --------------------------------------------------------------------------
# C_n(tau)


_C: list[RationalPoly] = []


def gen_C(n: int) -> RationalPoly:
    """Transition-region polynomial ``C_n(tau)``.

    Coefficients are filled top-down from ``c_{n,3n+2} = 1/(3^(n+1) (n+1)!)``
    in steps of two with

        c_{n,k} = (k+2) c_{n,k+2} + (k+1) c_{n-1,k+1}
                  - 2k/(k+1) c_{n-1,k-1} + 1/(k+1) c_{n-1,k-3}.

    The entries of the other parity are zero.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        if not _C:
            _C.append(RationalPoly([Fraction(-1, 3), 0, Fraction(1, 3)]))
        while len(_C) <= n:
            m = len(_C)
            prev = _C[-1]
            top = 3 * m + 2
            c = [Fraction(0)] * (top + 1)
            c[top] = Fraction(1, 3 ** (m + 1) * math.factorial(m + 1))
            for k in range(top - 2, -1, -2):
                c[k] = (
                    (k + 2) * c[k + 2]
                    + (k + 1) * prev[k + 1]
                    - Fraction(2 * k, k + 1) * prev[k - 1]
                    + Fraction(1, k + 1) * prev[k - 3]
                )
            _C.append(RationalPoly(c))
        return _C[n]


# --------------------------------------------------------------------------
# e_{k,n} and f_{k,n}


class SeriesTable:
    """Frozen view of a two-index coefficient table.

    ``table[k, n]`` is the coefficient of the k-th power in ``c_n``.  Each
    step in n consumes two rows of k, so the entry is available for
    ``k <= k_max - 2n``.
    """

    def __init__(self, family: str, columns: Sequence[Sequence[Fraction]], k_max: int, n_max: int):
        self.family = family
        self.k_max = k_max
        self.n_max = n_max
        self._cols = [tuple(col[: k_max - 2 * n + 1]) for n, col in enumerate(columns[: n_max + 1])]

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        k, n = index
        if n < 0 or k < 0 or n > self.n_max or k > self.k_max - 2 * n:
            raise FrontierError(
                f"{self.family}[{k},{n}] lies beyond the frontier k <= {self.k_max} - 2n, n <= {self.n_max}"
            )
        return self._cols[n][k]

    def column(self, n: int) -> tuple[Fraction, ...]:
        """All available coefficients of ``c_n``."""
        if not 0 <= n <= self.n_max:
            raise FrontierError(f"{self.family} column {n} not generated")
        return self._cols[n]

    def entries(self):
        for n, col in enumerate(self._cols):
            for k, v in enumerate(col):
                yield k, n, v


class _TableBuilder:
    """Append-only generator shared by all SeriesTable snapshots of one family."""

    def __init__(self, family: str, seed_row, step):
        self.family = family
        self._seed_row = seed_row
        self._step = step
        self.cols: list[list[Fraction]] = [[]]
        self._state: dict = {}

    def ensure(self, k_max: int, n_max: int) -> None:
        if k_max > TABLE_BUDGET:
            raise FrontierError(f"{k_max} rows exceeds the table budget of {TABLE_BUDGET}")
        if 2 * n_max > k_max:
            raise FrontierError(f"level n={n_max} needs at least {2 * n_max} rows, got k_max={k_max}")
        col0 = self.cols[0]
        while len(col0) <= k_max:
            col0.append(self._seed_row(len(col0), col0, self._state))
        while len(self.cols) <= n_max:
            self.cols.append([])
        for n in range(1, len(self.cols)):
            prev, cur = self.cols[n - 1], self.cols[n]
            while len(cur) <= len(prev) - 3:
                cur.append(self._step(len(cur), n - 1, prev, col0))


def _e_seed(k: int, e: list[Fraction], state: dict) -> Fraction:
    # s_l = sum_{m=1}^{l} (-1)^m/(m+1) e_{l-m,0}, cached so the double sum is O(k)
    s = state.setdefault("s", [])
    while len(s) < k:
        l = len(s) + 1
        s.append(sum((Fraction((-1) ** m, m + 1) * e[l - m] for m in range(1, l + 1)), Fraction(0)))
    v = Fraction((-1) ** (k + 1), k + 3)
    v -= 2 * sum((Fraction((-1) ** l, l + 2) * e[k - l] for l in range(1, k + 1)), Fraction(0))
    v -= sum((e[k - l] * s[l - 1] for l in range(1, k + 1)), Fraction(0))
    return v


def _e_step(k: int, n: int, prev: list[Fraction], col0: list[Fraction]) -> Fraction:
    return (k + 1) * prev[k + 1] + (k + 2) * prev[k + 2]


def _f_seed(k: int, f: list[Fraction], state: dict) -> Fraction:
    # sq[j] = [eta^j] c_0^2 and cu[j] = [eta^j] c_0^3, built as f grows
    sq = state.setdefault("sq", [])
    cu = state.setdefault("cu", [])
    while len(sq) < k:
        j = len(sq)
        sq.append(sum((f[i] * f[j - i] for i in range(j + 1)), Fraction(0)))
        cu.append(sum((f[i] * sq[j - i] for i in range(j + 1)), Fraction(0)))
    rhs = Fraction(1) if k == 0 else Fraction(0)
    if k >= 1:
        rhs += 2 * f[k - 1] + 3 * sq[k - 1]
    if k >= 2:
        rhs += sq[k - 2] + cu[k - 2]
    return -rhs / (k + 3)


def _f_step(k: int, n: int, prev: list[Fraction], col0: list[Fraction]) -> Fraction:
    return (k + 2) * prev[k + 2] - prev[1] * col0[k]


_e_builder = _TableBuilder("e", _e_seed, _e_step)
_f_builder = _TableBuilder("f", _f_seed, _f_step)


def gen_e_table(k_max: int, n_max: int) -> SeriesTable:
    """Coefficients ``e_{k,n}`` of ``c_n`` in powers of ``lam - 1``."""
    if k_max < 0 or n_max < 0:
        raise ValueError("extents must be non-negative")
    with _lock:
        _e_builder.ensure(k_max, n_max)
        return SeriesTable("e", _e_builder.cols, k_max, n_max)


def gen_f_table(k_max: int, n_max: int) -> SeriesTable:
    """Coefficients ``f_{k,n}`` of ``c_n`` in powers of ``eta``."""
    if k_max < 0 or n_max < 0:
        raise ValueError("extents must be non-negative")
    with _lock:
        _f_builder.ensure(k_max, n_max)
        return SeriesTable("f", _f_builder.cols, k_max, n_max)


def stirling_gamma(n: int) -> Fraction:
    """Stirling coefficient ``gamma_n`` from ``gamma_{n+1} = -f_{1,n}``.

    These are the coefficients of ``1/Gamma*(a) ~ sum gamma_n a^-n``
    (gamma_1 = -1/12).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    table = gen_f_table(2 * n + 1, n)
    return -table[1, n - 1]


# --------------------------------------------------------------------------
# Bell polynomials


def bell_partial(k: int, m: int, alpha: Sequence):
    """Partial ordinary Bell polynomial ``B_{k,m}(alpha_1, ..., alpha_{k-m+1})``.

    ``B_{k,m} = [x^k] (sum_j alpha_j x^j)^m``; ``alpha[0]`` is ``alpha_1``.
    Entries may be fractions or :class:`RationalPoly`.
    """
    if k < 0 or m < 0:
        raise IndexError("indices must be non-negative")
    if m > k:
        raise IndexError(f"B_{{{k},{m}}} needs m <= k")
    is_poly = any(isinstance(a, RationalPoly) for a in alpha)
    one = ONE if is_poly else Fraction(1)
    zero = RationalPoly() if is_poly else Fraction(0)
    if m == 0:
        return one if k == 0 else zero
    need = k - m + 1
    if len(alpha) < need:
        raise IndexError(f"B_{{{k},{m}}} needs {need} arguments, got {len(alpha)}")
    # (x * U(x))^m = x^m U^m, so B_{k,m} = [x^(k-m)] U^m
    u = list(alpha[:need])
    power = [one]
    for _ in range(m):
        power = series_mul(power, u, need)
    out = power[k - m]
    if is_poly and not isinstance(out, RationalPoly):
        out = RationalPoly([out])
    return out


# --------------------------------------------------------------------------
# P_k(tau0) and d_n(tau0)


_P: list[RationalPoly] = []


def gen_P(k: int) -> RationalPoly:
    """Taylor coefficient ``P_k(t0)`` of ``E`` about ``t0``: ``k P_k = t0 P_{k-1} + P_{k-2}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    with _lock:
        if not _P:
            _P.extend([ONE, RationalPoly([0, Fraction(1, 2)])])
        while len(_P) < k:
            j = len(_P) + 1
            _P.append((X * _P[-1] + _P[-2]) / j)
        return _P[k - 1]


class _DBuilder:
    """Incremental solver for the inverse-function recurrence.

    Keeps the partial powers U^m and V^m, where
    ``tau/sqrt(a) = x U(x)`` with ``U = t0 + d_0 x + d_1 x^2 + ...`` and
    ``tau - t0 = x V(x)`` with ``V = d_0 + d_1 x + ...``, ``x = a^(-1/2)``.
    Then ``B_{K,m}(t0, d_0, ...) = [x^(K-m)] U^m`` and
    ``B_{K,m}(d_0, ...) = [x^(K-m)] V^m``.
    """

    def __init__(self):
        self.d: list[RationalPoly] = []
        # upow[m][j] = [x^j] U^m, vpow likewise; filled column by column
        self.upow: list[list[RationalPoly]] = [[ONE]]
        self.vpow: list[list[RationalPoly]] = [[ONE]]

    def _u(self, j: int) -> RationalPoly:
        return X if j == 0 else self.d[j - 1]

    def _v(self, j: int) -> RationalPoly:
        return self.d[j]

    @staticmethod
    def _extend(pows: list[list[RationalPoly]], coef, j: int, m_max: int) -> None:
        # make [x^0..x^j] available for every power up to m_max
        while len(pows) <= m_max:
            pows.append([])
        for m, row in enumerate(pows):
            while len(row) <= j:
                jj = len(row)
                if m == 0:
                    row.append(ONE if jj == 0 else RationalPoly())
                else:
                    below = pows[m - 1]
                    row.append(sum((coef(i) * below[jj - i] for i in range(jj + 1)), RationalPoly()))

    def ensure(self, n: int) -> None:
        while len(self.d) <= n:
            k = len(self.d)
            # U^m needs [x^(k-nn)] for nn = 0..k, i.e. up to [x^k], involving d_{k-1}
            self._extend(self.upow, self._u, k, 3 * k + 2)
            total = RationalPoly()
            for nn in range(k + 1):
                cn = gen_C(nn)
                for m in range(3 * nn + 3):
                    c = cn[m]
                    if c:
                        total = total + self.upow[m][k - nn] * c
            if k >= 1:
                self._extend(self.vpow, self._v, k - 1, k + 1)
                for m in range(2, k + 2):
                    total = total - gen_P(m) * self.vpow[m][k + 1 - m]
            self.d.append(total)


_d_builder = _DBuilder()


def gen_d(n: int) -> RationalPoly:
    """Inverse-function polynomial ``d_n(t0)``.

    Solves the order-by-order balance of ``E(tau) = sum C_n(tau) a^-(n+1)/2``
    with ``tau = t0 + sum d_k a^-(k+1)/2``; the partial ordinary Bell
    polynomials are read off powers of the formal series.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    with _lock:
        _d_builder.ensure(n)
        return _d_builder.d[n]


def check_altdrec(k: int) -> bool:
    """Check the second (logarithmic) recurrence for the d_n exactly.

    The left side must equal ``-B_2n / (2n (2n-1))`` when ``k = 4n - 2`` and
    vanish otherwise.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    d = [gen_d(j) for j in range(k)]
    u = [X] + d  # t0, d_0, d_1, ...
    dprime = [p.derivative() for p in d]
    lhs = RationalPoly()
    for m in range(2, k + 3):
        lhs = lhs + bell_partial(k + 2, m, u) * Fraction((-1) ** m, m)
    for m in range(1, k + 1):
        diff = bell_partial(k, m, dprime) - bell_partial(k, m, u)
        lhs = lhs + diff * Fraction((-1) ** m, m)
    if (k + 2) % 4 == 0:
        n = (k + 2) // 4
        rhs = -bernoulli(2 * n) / (2 * n * (2 * n - 1))
    else:
        rhs = Fraction(0)
    return lhs == RationalPoly([rhs])


def delta_coefficient(k: int) -> Fraction:
    """Leading-coefficient sequence ``delta_k`` from its closed form.

    ``delta_k = (1/k!) d^(k-1)/dx^(k-1) [((x^2/2)/(e^x-x-1))^(k/2)]`` at 0,
    i.e. ``(1/k) [x^(k-1)] w(x)^(-k/2)`` with ``w = 2(e^x-x-1)/x^2``;
    valid for k >= 3, with ``delta_2 = 1/3`` and ``delta_1 = 1``.
    """
    if k == 1:
        return Fraction(1)
    if k == 2:
        return Fraction(1, 3)
    if k < 1:
        raise ValueError("k must be >= 1")
    w = [Fraction(2, math.factorial(j + 2)) for j in range(k)]
    return series_pow(w, Fraction(-k, 2), k)[k - 1] / k


def check_delta(k: int) -> bool:
    """True iff ``d_{k-2}`` has degree k and leading coefficient ``delta_k``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    d = gen_d(k - 2)
    return d.degree() == k and d.leading() == delta_coefficient(k)


# --------------------------------------------------------------------------
# dump format

POLY_FAMILIES = {"b": gen_b, "a": gen_a, "C": gen_C, "d": gen_d, "P": gen_P}
TABLE_FAMILIES = {"e": gen_e_table, "f": gen_f_table}


def format_fraction(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def dump_poly_line(family: str, n: int, poly: RationalPoly) -> str:
    """``family n k num/den k num/den ...`` over the nonzero coefficients."""
    parts = [family, str(n)]
    for k, c in enumerate(poly.coeffs):
        if c:
            parts.extend([str(k), format_fraction(c)])
    return " ".join(parts)


def parse_poly_line(line: str) -> tuple[str, int, RationalPoly]:
    tokens = line.split()
    if len(tokens) < 2 or len(tokens) % 2:
        raise ValueError(f"malformed coefficient line: {line!r}")
    family, n = tokens[0], int(tokens[1])
    coeffs: dict[int, Fraction] = {}
    for k_tok, frac_tok in zip(tokens[2::2], tokens[3::2]):
        coeffs[int(k_tok)] = Fraction(frac_tok)
    deg = max(coeffs, default=-1)
    return family, n, RationalPoly(coeffs.get(k, 0) for k in range(deg + 1))


def dump_family(family: str, n_max: int, k_max: int | None = None) -> list[str]:
    """Dump lines for ``family`` up to index ``n_max``.

    Polynomial families start at index 0 (``P`` at 1).  Series tables emit
    ``family k n num/den`` for every generated entry with ``k <= k_max``
    (default ``n_max``) at each level.
    """
    if family in POLY_FAMILIES:
        start = 1 if family == "P" else 0
        gen = POLY_FAMILIES[family]
        return [dump_poly_line(family, n, gen(n)) for n in range(start, n_max + 1)]
    if family in TABLE_FAMILIES:
        k_keep = n_max if k_max is None else k_max
        table = TABLE_FAMILIES[family](k_keep + 2 * n_max, n_max)
        return [
            f"{family} {k} {n} {format_fraction(v)}"
            for n in range(n_max + 1)
            for k, v in enumerate(table.column(n)[: k_keep + 1])
        ]
    raise ValueError(f"unknown family {family!r}")
