import itertools
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from matrixchannels.field import FieldMatrix, gf


def rank_gf2(rows):
    """Rank over GF(2) by bitmask elimination; independent of the library kernels."""
    basis = []
    for row in rows:
        v = int("".join(str(int(x)) for x in row) or "0", 2)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def all_binary(n, m):
    for bits in itertools.product((0, 1), repeat=n * m):
        yield np.array(bits, dtype=np.int64).reshape(n, m)


def chi2_uniform_pvalue(keys, support):
    """p-value of a chi-square goodness-of-fit test against uniform on ``support``."""
    counts = Counter(keys)
    assert set(counts) <= set(support), set(counts) - set(support)
    observed = [counts.get(s, 0) for s in support]
    return chisquare(observed).pvalue


def key(M):
    return tuple(map(tuple, M.data.tolist()))


@pytest.fixture
def F2():
    return gf(2)


def mat(q, rows):
    return FieldMatrix.from_rows(q, rows)


def exact_trap_failure(q, n, m, t, v):
    """P[rank(B1 Z1) < t] for B uniform full-rank n x t, Z uniform full-rank t x m,
    B1 the top v rows of B and Z1 the left v columns of Z.

    The product has rank t iff both factors do; a full-rank top block leaves
    the remaining rows free, so P[rank B1 = t] = |T_{v x t}| q^{(n-v)t} / |T_{n x t}|.
    """
    from fractions import Fraction

    def full(a, b):
        r = min(a, b)
        out = 1
        for i in range(r):
            out *= q ** max(a, b) - q**i
        return out

    pb = Fraction(full(v, t) * q ** ((n - v) * t), full(n, t))
    pz = Fraction(full(t, v) * q ** (t * (m - v)), full(t, m))
    return 1 - pb * pz
