"""Exact subspace and rank-ensemble counts over GF(q).

All counts are Python ints; nothing in here rounds except :func:`log_q_count`.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _check_order(q: int) -> None:
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")


def gaussian_coefficient(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^m.

    Multiplies one numerator factor at a time and divides immediately; every
    partial product is itself a Gaussian coefficient, so the division is exact.
    """
    _check_order(q)
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    k = min(k, m - k)
    out = 1
    for i in range(k):
        out = out * (q ** (m - i) - 1)
        den = q ** (i + 1) - 1
        assert out % den == 0
        out //= den
    return out


def count_full_rank(n: int, m: int, q: int) -> int:
    """|T_{n x m}|: number of n x m matrices of rank min(n, m)."""
    _check_order(q)
    lo, hi = min(n, m), max(n, m)
    out = 1
    for i in range(lo):
        out *= q**hi - q**i
    return out


def count_nonsingular(n: int, q: int) -> int:
    return count_full_rank(n, n, q)


def count_rank_matrices(n: int, m: int, t: int, q: int) -> int:
    """|T_{n x m, t}| = |T_{n x t}| * [m choose t]_q."""
    if not 0 <= t <= min(n, m):
        raise ValueError(f"rank t={t} out of range for {n}x{m}")
    return count_full_rank(n, t, q) * gaussian_coefficient(m, t, q)


def count_rank_matrices_product_form(n: int, m: int, t: int, q: int) -> int:
    """Same count via q^{(n+m-t)t} prod (1-q^{i-n})(1-q^{i-m}) / (1-q^{i-t})."""
    if not 0 <= t <= min(n, m):
        raise ValueError(f"rank t={t} out of range for {n}x{m}")
    val = Fraction(q) ** ((n + m - t) * t)
    for i in range(t):
        qq = Fraction(q)
        val *= (1 - qq ** (i - n)) * (1 - qq ** (i - m)) / (1 - qq ** (i - t))
    if val.denominator != 1:
        raise ArithmeticError("product form did not evaluate to an integer")
    return val.numerator


def count_superspaces(m: int, k: int, n: int, q: int) -> int:
    """Number of n-dim subspaces of GF(q)^m containing a fixed k-dim subspace."""
    if not 0 <= k <= n <= m:
        raise ValueError(f"need 0 <= k <= n <= m, got k={k}, n={n}, m={m}")
    return gaussian_coefficient(m - k, n - k, q)


def gc_sandwich_bounds(m: int, k: int, q: int) -> tuple[int, int]:
    """(q^{(m-k)k}, 4 q^{(m-k)k}); strict around the coefficient for 0 < k < m."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    base = q ** ((m - k) * k)
    gc = gaussian_coefficient(m, k, q)
    if 0 < k < m:
        assert base < gc < 4 * base, (m, k, q)
    else:
        assert gc == base
    return base, 4 * base


def sum_gc_bounds(n: int, m: int, q: int) -> tuple[int, int, int]:
    """(gc(m, n*), sum_{k<=n} gc(m, k), (n+1) gc(m, n*)) with n* = min(n, m//2).

    Both inequalities are strict for n >= 1 except at m = 1, where every
    term equals 1 and the upper bound is attained.
    """
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    total = sum(gaussian_coefficient(m, k, q) for k in range(n + 1))
    n_star = min(n, m // 2)
    peak = gaussian_coefficient(m, n_star, q)
    if n >= 1:
        assert peak < total <= (n + 1) * peak, (n, m, q)
        assert m == 1 or total < (n + 1) * peak, (n, m, q)
    return peak, total, (n + 1) * peak


def log_q_count(x: int, q: int) -> float:
    """log_q of a positive big integer without converting it to float.

    Splits x = mantissa * 2^shift with a 53-bit mantissa, so the result is
    accurate to double precision regardless of the size of x.
    """
    if x <= 0:
        raise ValueError(f"log of non-positive count {x}")
    shift = max(x.bit_length() - 53, 0)
    mant = x >> shift
    return (math.log2(mant) + shift) / math.log2(q)
