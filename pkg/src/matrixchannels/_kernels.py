"""Jitted GF(q) inner loops.

Every kernel takes the field as ``(mode, p, k, exp, log, inv)``:

* mode 0: prime field, arithmetic mod p
* mode 1: characteristic 2 extension, addition is XOR
* mode 2: odd characteristic extension, digit-wise addition in base p

Multiplication always goes through the log/antilog tables, which are built
for every field (prime fields use a primitive root).
"""

import numpy as np
from numba import njit

PRIME, CHAR2, ODD_EXT = 0, 1, 2


@njit(cache=True, inline="always")
def gf_add(a, b, mode, p, k):
    if mode == 0:
        s = a + b
        return s - p if s >= p else s
    if mode == 1:
        return a ^ b
    out = 0
    scale = 1
    for _ in range(k):
        d = (a % p + b % p) % p
        out += d * scale
        a //= p
        b //= p
        scale *= p
    return out


@njit(cache=True, inline="always")
def gf_neg(a, mode, p, k):
    if mode == 0:
        return 0 if a == 0 else p - a
    if mode == 1:
        return a
    out = 0
    scale = 1
    for _ in range(k):
        d = a % p
        out += ((p - d) % p) * scale
        a //= p
        scale *= p
    return out


@njit(cache=True, inline="always")
def gf_mul(a, b, exp, log):
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@njit(cache=True)
def add_mat(a, b, mode, p, k):
    n, m = a.shape
    out = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            out[i, j] = gf_add(a[i, j], b[i, j], mode, p, k)
    return out


@njit(cache=True)
def neg_mat(a, mode, p, k):
    n, m = a.shape
    out = np.empty((n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            out[i, j] = gf_neg(a[i, j], mode, p, k)
    return out


@njit(cache=True)
def matmul(a, b, mode, p, k, exp, log):
    n, r = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for l in range(r):
            c = a[i, l]
            if c == 0:
                continue
            lc = log[c]
            for j in range(m):
                x = b[l, j]
                if x != 0:
                    out[i, j] = gf_add(out[i, j], exp[lc + log[x]], mode, p, k)
    return out


@njit(cache=True)
def rref_inplace(a, pivot_cols, mode, p, k, exp, log, inv):
    """Gauss-Jordan on ``a`` in place, pivoting only in the first ``pivot_cols``
    columns.  Pivot row is the first nonzero at or below the current row.
    Returns ``(rank, pivots)``; extra columns are carried along, which is how
    the row transform is recovered from an augmented ``[M | I]``."""
    n, m = a.shape
    pivots = np.empty(min(n, pivot_cols), dtype=np.int64)
    row = 0
    for col in range(pivot_cols):
        if row == n:
            break
        sel = -1
        for i in range(row, n):
            if a[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != row:
            for j in range(m):
                tmp = a[row, j]
                a[row, j] = a[sel, j]
                a[sel, j] = tmp
        piv = a[row, col]
        if piv != 1:
            s = inv[piv]
            for j in range(m):
                x = a[row, j]
                if x != 0:
                    a[row, j] = exp[log[x] + log[s]]
        for i in range(n):
            if i == row:
                continue
            f = a[i, col]
            if f == 0:
                continue
            # a[i] -= f * a[row]
            nf = gf_neg(f, mode, p, k)
            lnf = log[nf]
            for j in range(m):
                x = a[row, j]
                if x != 0:
                    a[i, j] = gf_add(a[i, j], exp[lnf + log[x]], mode, p, k)
        pivots[row] = col
        row += 1
    return row, pivots[:row].copy()


@njit(cache=True)
def rank_of(a, mode, p, k, exp, log, inv):
    work = a.copy()
    r, _ = rref_inplace(work, work.shape[1], mode, p, k, exp, log, inv)
    return r
