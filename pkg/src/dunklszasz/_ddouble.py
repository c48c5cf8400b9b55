"""Minimal double-double arithmetic on (hi, lo) float pairs.

Only the handful of operations needed to run the alternating Dunkl series
at ~106 bits of precision. Algorithms are the classic error-free
transformations of Knuth (two_sum) and Dekker (split/two_prod).
"""

from __future__ import annotations

from typing import Tuple

DD = Tuple[float, float]

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> DD:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a: float, b: float) -> DD:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> DD:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> DD:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(a: DD, b: DD) -> DD:
    s, e = two_sum(a[0], b[0])
    t, f = two_sum(a[1], b[1])
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


def dd_neg(a: DD) -> DD:
    return -a[0], -a[1]


def dd_mul_d(a: DD, b: float) -> DD:
    p, e = two_prod(a[0], b)
    e += a[1] * b
    return quick_two_sum(p, e)


def dd_div(a: DD, b: DD) -> DD:
    q1 = a[0] / b[0]
    r = dd_add(a, dd_neg(dd_mul_d(b, q1)))
    q2 = r[0] / b[0]
    r = dd_add(r, dd_neg(dd_mul_d(b, q2)))
    q3 = r[0] / b[0]
    q = quick_two_sum(q1, q2)
    return dd_add(q, (q3, 0.0))


def to_float(a: DD) -> float:
    return a[0] + a[1]
