"""Exact rational polynomials and truncated power series.

Coefficients are :class:`fractions.Fraction`.  Truncated power series are
plain lists whose entries may be any ring element supporting ``+`` and ``*``
(fractions or :class:`RationalPoly`), which is how the polynomial-valued
series in :mod:`transgamma.coeffs` are built.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class RationalPoly:
    """Univariate polynomial with exact rational coefficients.

    ``coeffs[k]`` multiplies ``x**k``.  Trailing zeros are stripped, so the
    zero polynomial has an empty coefficient tuple and degree ``-1``.
    Instances are immutable and hashable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [_as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, value: Scalar) -> RationalPoly:
        return cls([value])

    @classmethod
    def monomial(cls, k: int, coeff: Scalar = 1) -> RationalPoly:
        return cls([0] * k + [coeff])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    # ring operations

    def _coerce(self, other) -> RationalPoly | None:
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPoly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self._c), len(o._c))
        return RationalPoly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> RationalPoly:
        return RationalPoly(-c for c in self._c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPoly(c * other for c in self._c)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        if not self._c or not other._c:
            return RationalPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPoly(c / other for c in self._c)
        return NotImplemented

    def __pow__(self, n: int) -> RationalPoly:
        if n < 0:
            raise ValueError("negative power")
        result = RationalPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"RationalPoly({[str(c) for c in self._c]})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "x" if k == 1 else f"x^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    # calculus and transformations

    def derivative(self) -> RationalPoly:
        return RationalPoly(k * c for k, c in enumerate(self._c) if k > 0)

    def reflect(self) -> RationalPoly:
        """Return ``p(-x)``."""
        return RationalPoly(-c if k % 2 else c for k, c in enumerate(self._c))

    def parity(self) -> int | None:
        """0 if even, 1 if odd, None if mixed (the zero polynomial counts as even)."""
        odd = any(c for k, c in enumerate(self._c) if k % 2)
        even = any(c for k, c in enumerate(self._c) if not k % 2)
        if odd and even:
            return None
        return 1 if odd else 0

    def rotate(self, n: int) -> RationalPoly:
        """Real polynomial ``R`` with ``R(t) == (-i)**n * p(i*t)``.

        Requires ``p`` to have the parity of ``n``; then every surviving
        power of ``i`` is even and the result has rational coefficients.
        """
        out = []
        for k, c in enumerate(self._c):
            if c == 0:
                out.append(c)
                continue
            if (n + k) % 2:
                raise ValueError(f"coefficient of x^{k} breaks the parity of n={n}")
            # (-i)^n i^k = (-1)^n i^(n+k) = (-1)^(n + (n+k)/2)
            sign = -1 if (n + (n + k) // 2) % 2 else 1
            out.append(sign * c)
        return RationalPoly(out)

    # evaluation

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        """Correctly rounded ``float(p(x))`` for a binary64 argument.

        The float is converted exactly to a rational and the polynomial is
        evaluated in integer arithmetic, so there is no cancellation error.
        """
        if not self._c:
            return 0.0
        num, den = float(x).as_integer_ratio()
        common = math.lcm(*(c.denominator for c in self._c))
        return _eval_scaled(self._c, num, den, common)

    def as_floats(self) -> list[float]:
        return [float(c) for c in self._c]


def _eval_scaled(coeffs: Sequence[Fraction], num: int, den: int, common: int) -> float:
    # p(num/den) = sum_k c_k num^k den^(d-k) / (den^d * common), with c_k scaled by common
    d = len(coeffs) - 1
    acc = 0
    den_pow = 1
    for k in range(d, -1, -1):
        c = coeffs[k]
        acc = acc * num + c.numerator * (common // c.denominator) * den_pow
        den_pow *= den
    # acc now holds sum_k c_k*common * num^k * den^(d-k)
    return acc / (common * den**d)


# truncated power series: list index = power, length = number of kept terms


def series_mul(f: Sequence, g: Sequence, n: int) -> list:
    """First ``n`` coefficients of ``f*g``."""
    out = []
    for k in range(n):
        acc = Fraction(0)
        for j in range(max(0, k - len(g) + 1), min(k, len(f) - 1) + 1):
            acc = acc + f[j] * g[k - j]
        out.append(acc)
    return out


def series_pow(f: Sequence[Fraction], alpha: Fraction, n: int) -> list[Fraction]:
    """First ``n`` coefficients of ``f**alpha`` for a series with ``f[0] == 1``."""
    if f[0] != 1:
        raise ValueError("series_pow needs a unit constant term")
    alpha = Fraction(alpha)
    h = [Fraction(1)]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, min(k, len(f) - 1) + 1):
            acc += ((alpha + 1) * j - k) * f[j] * h[k - j]
        h.append(acc / k)
    return h


def series_exp(g: Sequence, n: int) -> list:
    """First ``n`` coefficients of ``exp(g)`` for a series with ``g[0] == 0``.

    Works for any coefficient ring that supports division by integers.
    """
    h = [Fraction(1)]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, min(k, len(g) - 1) + 1):
            acc = acc + j * g[j] * h[k - j]
        h.append(acc / k)
    return h


def series_derivative(f: Sequence) -> list:
    return [k * f[k] for k in range(1, len(f))]
