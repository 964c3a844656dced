"""Uniform samplers for the matrix ensembles the channels draw from."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .field import GF, FieldMatrix, gf, mat_mul, rank_array

MAX_RETRIES = 1000
PMF_TOL = 1e-12


def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def fork_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent stream for trial ``key``; depends only on (seed, key)."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def as_field(q: GF | int) -> GF:
    return q if isinstance(q, GF) else gf(q)


class RankFactorization(NamedTuple):
    B: FieldMatrix  # n x t, full column rank
    Z: FieldMatrix  # t x m, full row rank


def _uniform_array(rng: np.random.Generator, field: GF, n: int, m: int) -> np.ndarray:
    q = field.q
    if q & (q - 1) == 0:
        # random() returns multiples of 2^-53, so floor(u q) is exactly uniform
        # when q divides 2^53; several times cheaper than integers() on tiny arrays
        return (rng.random((n, m)) * q).astype(np.int64)
    return rng.integers(0, q, size=(n, m), dtype=np.int64)


def sample_uniform(rng: np.random.Generator, n: int, m: int, q: GF | int) -> FieldMatrix:
    field = as_field(q)
    return FieldMatrix._wrap(field, _uniform_array(rng, field, n, m))


def _full_rank_array(rng, field, n, m):
    target = min(n, m)
    if target == 0:
        return np.zeros((n, m), dtype=np.int64)
    for _ in range(MAX_RETRIES):
        a = _uniform_array(rng, field, n, m)
        if rank_array(field, a) == target:
            return a
    raise RuntimeError(
        f"no full-rank {n}x{m} matrix over {field} in {MAX_RETRIES} draws; "
        "acceptance probability is > 0.28, so the RNG is suspect"
    )


def sample_full_rank(rng: np.random.Generator, n: int, m: int, q: GF | int) -> FieldMatrix:
    """Uniform over n x m matrices of rank min(n, m), by rejection."""
    field = as_field(q)
    return FieldMatrix._wrap(field, _full_rank_array(rng, field, n, m))


def sample_nonsingular(rng: np.random.Generator, n: int, q: GF | int) -> FieldMatrix:
    return sample_full_rank(rng, n, n, q)


def sample_rank_t(
    rng: np.random.Generator, n: int, m: int, t: int, q: GF | int
) -> tuple[FieldMatrix, RankFactorization]:
    """Uniform rank-t matrix as W = B Z with independent uniform full-rank factors.

    Each rank-t W has exactly |GL_t| factorizations, so W is uniform.
    """
    if not 0 <= t <= min(n, m):
        raise ValueError(f"rank t={t} out of range for {n}x{m}")
    field = as_field(q)
    B = FieldMatrix._wrap(field, _full_rank_array(rng, field, n, t))
    Z = FieldMatrix._wrap(field, _full_rank_array(rng, field, t, m))
    return mat_mul(B, Z), RankFactorization(B, Z)


def validate_pmf(pmf: Sequence[float]) -> np.ndarray:
    p = np.asarray(pmf, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("rank pmf must be a non-empty 1-D sequence")
    if (p < 0).any() or abs(p.sum() - 1.0) > PMF_TOL:
        raise ValueError(f"invalid rank pmf {pmf!r}: entries must be >= 0 and sum to 1")
    return p


def sample_rank(rng: np.random.Generator, pmf: Sequence[float], n: int, m: int) -> int:
    p = validate_pmf(pmf)
    t = p.size - 1
    if t > min(n, m):
        raise ValueError(f"pmf support {{0..{t}}} exceeds min(n, m) = {min(n, m)}")
    support = np.flatnonzero(p)
    if support.size == 1:
        # no draw: a point mass leaves the stream exactly as in fixed-rank mode
        return int(support[0])
    return int(rng.choice(t + 1, p=p / p.sum()))


def sample_variable_rank(
    rng: np.random.Generator, n: int, m: int, pmf: Sequence[float], q: GF | int
) -> tuple[FieldMatrix, int]:
    """Draw R from ``pmf`` over {0..t}, then W uniform of rank R."""
    r = sample_rank(rng, pmf, n, m)
    W, _ = sample_rank_t(rng, n, m, r, q)
    return W, r
