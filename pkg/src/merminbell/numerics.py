"""Exact half-integer labels and numerically stable scalar kernels.

The spin sums evaluated elsewhere in this package multiply square roots of
large binomial coefficients by high powers of detector transmissivities.
Magnitudes of such factors are assembled in the log domain (``LogMagnitude``,
``log_choose``) and turned back into ordinary floats only when terms are
accumulated.  Rotation matrix elements use the explicit signed sum over the
photon-redistribution index, which is well defined for every index
combination, with exact integer factorial ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "HalfInt",
    "half",
    "half_range",
    "LogMagnitude",
    "logmag_sum",
    "binom",
    "binom_int",
    "log_choose",
    "jacobi_poly",
    "wigner_d",
    "wigner_d_matrix",
]

_NEG_INF = float("-inf")


@dataclass(frozen=True, order=True)
class HalfInt:
    """Half-integer quantum number stored exactly as twice its value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, float or HalfInt to an exact half-integer."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(2 * int(value))
        doubled = 2.0 * float(value)
        rounded = round(doubled)
        if abs(doubled - rounded) > 1e-9:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(rounded))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2.0

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other) -> "HalfInt":
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.twice))

    def __mul__(self, k):
        if isinstance(k, (int, np.integer)):
            return HalfInt(self.twice * int(k))
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def half(value) -> HalfInt:
    """Shorthand for ``HalfInt.of``."""
    return HalfInt.of(value)


def half_range(lo, hi, step=HalfInt(1)) -> Iterator[HalfInt]:
    """Inclusive range of half-integers, default step 1/2."""
    lo, hi, step = HalfInt.of(lo), HalfInt.of(hi), HalfInt.of(step)
    if step.twice <= 0:
        raise ValueError("step must be positive")
    t = lo.twice
    while t <= hi.twice:
        yield HalfInt(t)
        t += step.twice


@dataclass(frozen=True)
class LogMagnitude:
    """Signed magnitude kept as (sign, ln|x|); sign 0 encodes exact zero.

    Products and quotients are exact in the log domain; sums go through
    ``logmag_sum`` which factors out the largest magnitude first.
    """

    sign: int
    log_abs: float

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0, _NEG_INF)

    @classmethod
    def one(cls) -> "LogMagnitude":
        return cls(1, 0.0)

    @classmethod
    def from_value(cls, x: float) -> "LogMagnitude":
        if x == 0.0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_pow(cls, base: float, exponent: float) -> "LogMagnitude":
        """base**exponent for base >= 0, with the convention 0**0 == 1."""
        if exponent == 0:
            return cls.one()
        if base == 0.0:
            return cls.zero()
        if base < 0:
            raise ValueError("from_pow requires a nonnegative base")
        return cls(1, exponent * math.log(base))

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.sign == 0:
            raise ZeroDivisionError("division by exact zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)

    def sqrt(self) -> "LogMagnitude":
        if self.sign < 0:
            raise ValueError("sqrt of a negative LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(1, 0.5 * self.log_abs)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    @property
    def value(self) -> float:
        return self.to_float()


def logmag_sum(terms: Iterable[LogMagnitude]) -> LogMagnitude:
    """Signed sum of LogMagnitudes via max-factoring."""
    live = [t for t in terms if t.sign != 0]
    if not live:
        return LogMagnitude.zero()
    m = max(t.log_abs for t in live)
    if m == _NEG_INF:
        return LogMagnitude.zero()
    acc = 0.0
    for t in live:
        acc += t.sign * math.exp(t.log_abs - m)
    if acc == 0.0:
        return LogMagnitude.zero()
    return LogMagnitude(1 if acc > 0 else -1, m + math.log(abs(acc)))


def binom_int(n: int, k: int) -> int:
    """C(n, k) as an exact integer; 0 outside 0 <= k <= n (including n < 0)."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def _log_fact(n: int) -> float:
    return math.lgamma(n + 1)


def log_choose(n: int, k: int) -> float:
    """ln C(n, k); -inf outside the support."""
    if n < 0 or k < 0 or k > n:
        return _NEG_INF
    return _log_fact(n) - _log_fact(k) - _log_fact(n - k)


def binom(n: int, k: int) -> LogMagnitude:
    """Binomial coefficient as a LogMagnitude; exact zero out of range."""
    lg = log_choose(n, k)
    if lg == _NEG_INF:
        return LogMagnitude.zero()
    return LogMagnitude(1, lg)


def jacobi_poly(n: int, a: int, b: int, x: float) -> float:
    """P_n^{(a,b)}(x) by the three-term recurrence (assumes a, b > -1)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    p_prev = 1.0
    if n == 0:
        return p_prev
    p = (a + 1) + (a + b + 2) * (x - 1) / 2.0
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + a + b) * (2 * k + a + b - 2)
        c2 = (2 * k + a + b - 1) * ((2 * k + a + b) * (2 * k + a + b - 2) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1) * (k + b - 1) * (2 * k + a + b)
        p, p_prev = (c2 * p - c3 * p_prev) / c1, p
    return p


def _d_element(ts: int, t1: int, t2: int, alpha: float) -> float:
    """<s m1|exp(-i alpha S_y)|s m2> with all labels given as twice-values."""
    jp1 = (ts + t1) // 2
    jm1 = (ts - t1) // 2
    jp2 = (ts + t2) // 2
    jm2 = (ts - t2) // 2
    dm = (t1 - t2) // 2  # m1 - m2
    k_lo = max(0, -dm)
    k_hi = min(jp2, jm1)
    if k_hi < k_lo:
        return 0.0
    c = math.cos(alpha / 2.0)
    sn = math.sin(alpha / 2.0)
    fnum = (
        math.factorial(jp1)
        * math.factorial(jm1)
        * math.factorial(jp2)
        * math.factorial(jm2)
    )
    total = 0.0
    for k in range(k_lo, k_hi + 1):
        den = (
            math.factorial(jp2 - k)
            * math.factorial(k)
            * math.factorial(jm1 - k)
            * math.factorial(dm + k)
        )
        # exact integer ratio converted once; avoids overflow of fnum alone
        mag = math.sqrt(fnum / (den * den))
        term = mag * c ** (ts - dm - 2 * k) * sn ** (dm + 2 * k)
        if (dm + k) % 2:
            term = -term
        total += term
    return total


def _check_spin_label(ts: int, tm: int) -> None:
    if ts < 0 or abs(tm) > ts or (ts - tm) % 2 != 0:
        raise ValueError(f"invalid spin label (2s={ts}, 2m={tm})")


def wigner_d(s, m1, m2, alpha: float) -> float:
    """Rotation matrix element <s m1|exp(-i*alpha*S_y)|s m2>; real valued."""
    ts = HalfInt.of(s).twice
    t1 = HalfInt.of(m1).twice
    t2 = HalfInt.of(m2).twice
    _check_spin_label(ts, t1)
    _check_spin_label(ts, t2)
    return _d_element(ts, t1, t2, float(alpha))


@lru_cache(maxsize=8192)
def _wigner_matrix_cached(ts: int, alpha: float) -> np.ndarray:
    n = ts + 1
    out = np.empty((n, n))
    for i1 in range(n):
        for i2 in range(n):
            out[i1, i2] = _d_element(ts, 2 * i1 - ts, 2 * i2 - ts, alpha)
    out.setflags(write=False)
    return out

def wigner_d_matrix(s, alpha: float) -> np.ndarray:
    """Full rotation block for spin s; rows/columns by ascending projection.

    The returned array is cached and read-only.
    """
    ts = HalfInt.of(s).twice
    if ts < 0:
        raise ValueError("spin must be nonnegative")
    return _wigner_matrix_cached(ts, float(alpha))
