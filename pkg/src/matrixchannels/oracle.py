"""Exhaustive ground truth for tiny matrix channels.

Matrices are indexed by reading their entries row-major as base-q digits,
first entry most significant.  Transition probabilities are kept as exact
integer counts over a common denominator (the size of the channel's random
ensemble).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .capacity import capacity_amc, capacity_mmc
from .field import GF, FieldMatrix, gf, rank_array, rref_array
from .params import ChannelParams, Variant

MAX_INPUTS = 4096
MAX_WORK = 10**8


class OracleTooLarge(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


def all_matrices(field: GF, n: int, m: int) -> np.ndarray:
    """Every n x m matrix, shape (q^{nm}, n, m), in index order."""
    q, size = field.q, n * m
    idx = np.arange(q**size, dtype=np.int64)
    digits = np.empty((idx.size, size), dtype=np.int64)
    for pos in range(size - 1, -1, -1):
        digits[:, pos] = idx % q
        idx //= q
    return digits.reshape(-1, n, m)


def matrix_index(a: np.ndarray, q: int) -> np.ndarray:
    """Inverse of :func:`all_matrices` on a stack of matrices (..., n, m)."""
    flat = a.reshape(*a.shape[:-2], -1)
    weights = q ** np.arange(flat.shape[-1] - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def matrices_of_rank(field: GF, n: int, m: int, r: int) -> np.ndarray:
    mats = all_matrices(field, n, m)
    keep = [i for i, a in enumerate(mats) if rank_array(field, a) == r]
    return mats[keep]


def _batched_matmul(field: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a (n x r) times every matrix in the stack b (N, r, m)."""
    n, r = a.shape
    out = np.zeros((b.shape[0], n, b.shape[2]), dtype=np.int64)
    for i in range(n):
        for l in range(r):
            if a[i, l]:
                out[:, i, :] = field.add_array(out[:, i, :], field.mul_array(a[i, l], b[:, l, :]))
    return out


@dataclass
class DiscreteChannel:
    """p(y|x) = counts[x, y] / denominator over all n x m inputs and outputs."""

    q: int
    n: int
    m: int
    counts: np.ndarray
    denominator: int
    variant: Variant = Variant.AMC

    def __post_init__(self):
        if (self.counts < 0).any() or (self.counts.sum(axis=1) != self.denominator).any():
            raise ValueError("transition counts must be non-negative with rows summing to the denominator")

    @property
    def P(self) -> np.ndarray:
        return self.counts / self.denominator

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def input_matrix(self, index: int) -> FieldMatrix:
        return FieldMatrix(gf(self.q), all_matrices(gf(self.q), self.n, self.m)[index])

    def stats(self) -> dict:
        nz = (self.counts > 0).sum(axis=1)
        return {
            "inputs": self.counts.shape[0],
            "outputs": self.counts.shape[1],
            "denominator": self.denominator,
            "min_support": int(nz.min()),
            "max_support": int(nz.max()),
        }


def _guard(params: ChannelParams, ensemble: int) -> None:
    inputs = params.q ** (params.n * params.m)
    if inputs > MAX_INPUTS:
        raise OracleTooLarge(
            f"q^(nm) = {params.q}^{params.n * params.m} = {inputs} inputs exceeds the limit {MAX_INPUTS}"
        )
    if inputs * ensemble > MAX_WORK:
        raise OracleTooLarge(
            f"{inputs} inputs x {ensemble} channel realizations = {inputs * ensemble} "
            f"law evaluations exceeds the limit {MAX_WORK}"
        )


def enumerate_channel(variant: Variant | str, params: ChannelParams) -> DiscreteChannel:
    """Exact p(Y|X) by running the channel law over every realization of its
    uniform random components."""
    variant = Variant(variant)
    q, n, m, t = params.q, params.n, params.m, params.t
    field = gf(q)
    if q ** (n * m) > MAX_INPUTS:
        _guard(params, 1)
    if variant is not Variant.MMC and t > min(n, m):
        raise ValueError(f"t={t} exceeds min(n, m)")

    # ensemble sizes first so the guard can refuse before any enumeration
    from .counting import count_full_rank, count_nonsingular, count_rank_matrices

    n_A = count_nonsingular(n, q)
    n_W = count_rank_matrices(n, m, t, q)
    size = {
        Variant.MMC: n_A,
        Variant.AMC: n_W,
        Variant.AMMC: n_A * n_W,
        Variant.GENERAL: n_A * count_full_rank(n, t, q) * count_full_rank(t, m, q),
    }[variant]
    _guard(params, size)

    X = all_matrices(field, n, m)
    N = X.shape[0]
    counts = np.zeros((N, N), dtype=np.int64)
    rows = np.arange(N)

    def tally(Y):
        np.add.at(counts, (rows, matrix_index(Y, q)), 1)

    if variant in (Variant.MMC, Variant.AMMC, Variant.GENERAL):
        As = matrices_of_rank(field, n, n, n)
    if variant in (Variant.AMC, Variant.AMMC):
        Ws = matrices_of_rank(field, n, m, t)

    if variant is Variant.MMC:
        for A in As:
            tally(_batched_matmul(field, A, X))
    elif variant is Variant.AMC:
        for W in Ws:
            tally(field.add_array(X, W))
    elif variant is Variant.AMMC:
        for W in Ws:
            S = field.add_array(X, W)
            for A in As:
                tally(_batched_matmul(field, A, S))
    else:
        Ds = matrices_of_rank(field, n, t, t)
        Zs = matrices_of_rank(field, t, m, t)
        DZs = [_batched_matmul(field, D, Zs) for D in Ds]
        for A in As:
            AX = _batched_matmul(field, A, X)
            for stack in DZs:
                for DZ in stack:
                    tally(field.add_array(AX, DZ))
    return DiscreteChannel(q, n, m, counts, int(size), variant)


def _log_ratio_terms(P: np.ndarray, p_y: np.ndarray) -> np.ndarray:
    """Per-input relative entropy D(p(.|x) || p_y) in nats."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(P / p_y), 0.0)
    return terms.sum(axis=1)


def mutual_information(channel: DiscreteChannel, p_x) -> float:
    """I(X;Y) in q-ary units."""
    p_x = np.asarray(p_x, dtype=float)
    if p_x.shape != (channel.shape[0],) or (p_x < 0).any() or abs(p_x.sum() - 1) > 1e-9:
        raise ValueError("p_x must be a probability vector over the channel inputs")
    used = p_x > 0  # unused inputs may put mass where p_y is zero
    P = channel.P[used]
    p_y = p_x[used] @ P
    return float(p_x[used] @ _log_ratio_terms(P, p_y)) / math.log(channel.q)


class BAResult(NamedTuple):
    capacity: float  # q-ary units
    p_x: np.ndarray
    iterations: int
    gap: float  # certified upper - lower, q-ary units


def blahut_arimoto(channel: DiscreteChannel, tolerance: float = 1e-9, max_iters: int = 100_000) -> BAResult:
    """Channel capacity by alternating maximization.

    Starts from the uniform input and stops once the standard certificate
    max_x D(p(.|x)||p_y) - I(p_x) drops below ``tolerance`` (q-ary units);
    the true capacity lies in [I, I + gap].
    """
    P = channel.P
    ln_q = math.log(channel.q)
    p_x = np.full(P.shape[0], 1.0 / P.shape[0])
    for it in range(1, max_iters + 1):
        d = _log_ratio_terms(P, p_x @ P)
        # lower bound: log sum p(x) e^{D(x)}; upper bound: max D(x)
        dmax = d.max()
        w = p_x * np.exp(d - dmax)
        lower = dmax + math.log(w.sum())
        gap = (dmax - lower) / ln_q
        if gap < tolerance:
            p_x = w / w.sum()
            cap = mutual_information(channel, p_x)
            return BAResult(cap, p_x, it, float(gap))
        p_x = w / w.sum()
    raise ConvergenceError(f"Blahut-Arimoto gap {float(gap):.3g} above {tolerance} after {max_iters} iterations")


@dataclass
class OrbitTable:
    """Row-space classes of n x m matrices under left multiplication by GL_n.

    Keys are the nonzero rows of the RRE form (as a tuple of tuples);
    values are the member indices in :func:`all_matrices` order.
    """

    q: int
    n: int
    m: int
    orbits: dict[tuple, list[int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_of(self, index: int) -> tuple:
        for key, members in self.orbits.items():
            if index in members:
                return key
        raise KeyError(index)


def row_space_key(field: GF, a: np.ndarray) -> tuple:
    R, r, _ = rref_array(field, a)
    return tuple(tuple(int(x) for x in row) for row in R[:r])


def _check_small(n, m, q):
    if q ** (n * m) > MAX_INPUTS:
        raise OracleTooLarge(f"q^(nm) = {q ** (n * m)} exceeds the limit {MAX_INPUTS}")


def build_orbit_table(n: int, m: int, q: int) -> OrbitTable:
    _check_small(n, m, q)
    field = gf(q)
    table = OrbitTable(q, n, m)
    for i, a in enumerate(all_matrices(field, n, m)):
        table.orbits.setdefault(row_space_key(field, a), []).append(i)
    return table


def mmc_capacity_code(n: int, m: int, q: int) -> list[FieldMatrix]:
    """One codeword per subspace of dimension <= n: its RRE basis padded with
    zero rows.  Ordered by dimension, then by index."""
    field = gf(q)
    table = build_orbit_table(n, m, q)
    words = []
    for key in table.orbits:
        a = np.zeros((n, m), dtype=np.int64)
        if key:
            a[: len(key)] = np.array(key, dtype=np.int64)
        words.append(a)
    words.sort(key=lambda a: (rank_array(field, a), int(matrix_index(a, q))))
    return [FieldMatrix(field, a) for a in words]


def decode_subspace_code(codebook: list[FieldMatrix], Y: FieldMatrix) -> int:
    """Index of the codeword sharing Y's row space."""
    key = row_space_key(Y.field, Y.data)
    for i, c in enumerate(codebook):
        if row_space_key(c.field, c.data) == key:
            return i
    raise KeyError("received row space matches no codeword")


def oracle_report(variant: Variant | str, params: ChannelParams, tolerance: float = 1e-9) -> dict:
    """BA capacity of the enumerated channel next to the closed-form values."""
    from .capacity import capacity_report

    variant = Variant(variant)
    ch = enumerate_channel(variant, params)
    ba = blahut_arimoto(ch, tolerance=tolerance)
    rep = capacity_report(variant, params)
    out = {
        "variant": variant.value,
        "params": params.as_dict(),
        "channel": ch.stats(),
        "ba_capacity": ba.capacity,
        "ba_gap": ba.gap,
        "ba_iterations": ba.iterations,
    }
    if variant is Variant.MMC:
        out["formula"] = capacity_mmc(params)
    elif variant is Variant.AMC:
        out["formula"] = capacity_amc(params)
    if "formula" in out:
        out["delta"] = abs(out["formula"] - ba.capacity)
    else:
        out["lower"] = rep.lower
        out["lower_raw"] = rep.lower_raw
        out["upper"] = rep.upper
        lo = rep.lower if rep.lower is not None else 0.0
        hi = rep.upper if rep.upper is not None else math.inf
        out["within_bounds"] = bool(lo <= ba.capacity <= hi)
    return out
