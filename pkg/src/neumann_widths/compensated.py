"""Compensated (Kahan) summation and a minimal double-double layer.

Every series evaluator in the package accumulates through KahanSum; the
determinant module additionally re-runs eliminations in double-double
arithmetic when a result is too close to its rounding floor.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1


class KahanSum:
    """Kahan-Babuska compensated accumulator."""

    __slots__ = ("_sum", "_comp")

    def __init__(self, value: float = 0.0):
        self._sum = value
        self._comp = 0.0

    def add(self, x: float) -> None:
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    @property
    def value(self) -> float:
        return self._sum + self._comp

    def as_pair(self) -> tuple[float, float]:
        """(sum, compensation): adding the parts recovers extra accuracy."""
        return self._sum, self._comp


def kahan_sum(terms) -> float:
    acc = KahanSum()
    for t in terms:
        acc.add(t)
    return acc.value


# -- double-double primitives (hi, lo) with hi + lo exact ----------------

def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def dd_from(a: float, b: float = 0.0) -> tuple[float, float]:
    s, e = two_sum(a, b)
    return s, e


def dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    hi = s + e
    return hi, e - (hi - s)


def dd_neg(x: tuple[float, float]) -> tuple[float, float]:
    return -x[0], -x[1]

def dd_sub(x, y):
    return dd_add(x, dd_neg(y))


def dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    hi = p + e
    return hi, e - (hi - p)


def dd_div(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    q1 = x[0] / y[0]
    r = dd_sub(x, dd_mul((q1, 0.0), y))
    q2 = (r[0] + r[1]) / y[0]
    hi = q1 + q2
    return hi, q2 - (hi - q1)


def dd_abs(x: tuple[float, float]) -> tuple[float, float]:
    return dd_neg(x) if x[0] < 0.0 or (x[0] == 0.0 and x[1] < 0.0) else x


def dd_float(x: tuple[float, float]) -> float:
    return x[0] + x[1]


def dd_isfinite(x: tuple[float, float]) -> bool:
    return math.isfinite(x[0]) and math.isfinite(x[1])
