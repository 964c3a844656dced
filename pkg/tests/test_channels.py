from collections import Counter

import numpy as np
import pytest
from scipy.stats import chi2_contingency

from conftest import all_binary, chi2_uniform_pvalue, key, mat, rank_gf2
from matrixchannels.channels import (
    ChannelVariant,
    destination_derandomize,
    point_mass,
    replay,
    source_randomize_left,
    source_randomize_right,
    transmit,
    uniform_pmf,
)
from matrixchannels.field import FieldMatrix, gf, mat_inverse, rank, rref
from matrixchannels.oracle import enumerate_channel
from matrixchannels.params import ChannelParams, Variant
from matrixchannels.sampling import make_rng, sample_full_rank, sample_uniform

ALPHA = 0.001
P = ChannelParams


def row_space(M):
    res = rref(M)
    return res.R.data[: res.rank].tobytes()


def test_mmc_zero_input_stays_zero():
    rng = make_rng(0)
    X = FieldMatrix.zeros(gf(3), 3, 4)
    for _ in range(20):
        assert transmit("mmc", P(3, 3, 4), X, rng).Y.is_zero()


def test_amc_without_errors_is_identity():
    rng = make_rng(1)
    X = sample_uniform(rng, 3, 5, 4)
    rec = transmit("amc", P(4, 3, 5, 0), X, rng)
    assert rec.Y == X and rec.rank == 0 and rec.W.is_zero()


@pytest.mark.parametrize("kind", list(Variant))
@pytest.mark.parametrize("q,n,m,t", [(2, 4, 6, 2), (3, 3, 3, 1), (16, 2, 5, 2)])
def test_law_fidelity_and_rank_bookkeeping(kind, q, n, m, t):
    params = P(q, n, m, t)
    rng = make_rng([list(Variant).index(kind), q, n, m, t])
    trials = 10_000 if q == 2 else 1000
    for _ in range(trials):
        X = sample_uniform(rng, n, m, q)
        rec = transmit(kind, params, X, rng)
        assert replay(rec, kind) == rec.Y
        if kind is not Variant.MMC:
            assert rank(rec.error_matrix()) == rec.rank <= t
        if kind is Variant.MMC:
            assert row_space(rec.Y) == row_space(X)


def test_variable_rank_bookkeeping():
    rng = make_rng(5)
    params = P(2, 5, 6, 3)
    variant = ChannelVariant("ammc", rank_pmf=uniform_pmf(3))
    seen = Counter()
    for _ in range(2000):
        rec = transmit(variant, params, sample_uniform(rng, 5, 6, 2), rng)
        assert rank(rec.W) == rec.rank <= 3
        seen[rec.rank] += 1
    assert set(seen) == {0, 1, 2, 3}
    fixed = ChannelVariant("amc", rank_pmf=point_mass(2))
    assert all(transmit(fixed, params, FieldMatrix.zeros(gf(2), 5, 6), rng).rank == 2 for _ in range(50))


def test_variant_validation():
    with pytest.raises(ValueError):
        ChannelVariant("mmc", rank_pmf=(0.5, 0.5))
    with pytest.raises(ValueError):
        ChannelVariant("amc", constant_A=mat(2, [[1]]))
    with pytest.raises(ValueError):
        ChannelVariant("ammc", ad_sampler=lambda rng, r, p: None)
    with pytest.raises(ValueError):
        transmit(ChannelVariant("amc", rank_pmf=(0.2, 0.2, 0.6)), P(2, 2, 2, 1), mat(2, [[0, 0], [0, 0]]), make_rng(0))
    with pytest.raises(ValueError):
        transmit("amc", P(2, 2, 2, 1), mat(2, [[0, 0, 0], [0, 0, 0]]), make_rng(0))
    with pytest.raises(ValueError):
        transmit("amc", P(2, 2, 2, 1), mat(3, [[0, 0], [0, 0]]), make_rng(0))


def test_constant_A_and_hooks():
    rng = make_rng(6)
    A = mat(2, [[1, 1], [0, 1]])
    X = mat(2, [[1, 0, 1], [0, 1, 1]])
    rec = transmit(ChannelVariant("mmc", constant_A=A), P(2, 2, 3), X, rng)
    assert rec.Y == A @ X
    Z0 = mat(2, [[1, 0, 0]])
    hooked = ChannelVariant("ammc", z_sampler=lambda rng, r, p: Z0)
    rec = transmit(hooked, P(2, 2, 3, 1), X, rng)
    assert rec.Z == Z0 and rec.Y == rec.A @ (X + rec.B @ Z0)
    D0 = mat(2, [[1], [0]])
    joint = ChannelVariant("general", ad_sampler=lambda rng, r, p: (A, D0))
    rec = transmit(joint, P(2, 2, 3, 1), X, rng)
    assert rec.A == A and rec.D == D0 and rec.Y == A @ X + D0 @ rec.Z


def test_randomize_left():
    rng = make_rng(7)
    Xp = mat(2, [[1, 0, 1], [1, 0, 1]])
    for _ in range(100):
        X, T = source_randomize_left(Xp, rng)
        assert X == T @ Xp and row_space(X) == row_space(Xp)


def test_randomize_left_uniformizes_constant_A():
    rng = make_rng(8)
    A = mat(2, [[0, 1], [1, 1]])
    Xp = FieldMatrix.identity(gf(2), 2)
    gl2 = [tuple(map(tuple, a.tolist())) for a in all_binary(2, 2) if rank_gf2(a.tolist()) == 2]
    keys = []
    for _ in range(6000):
        _, T = source_randomize_left(Xp, rng)
        keys.append(key(A @ T))
    assert chi2_uniform_pvalue(keys, gl2) > ALPHA


def test_randomize_right_round_trip_without_errors():
    rng = make_rng(9)
    params = P(3, 2, 4, 0)
    Xp = sample_uniform(rng, 2, 4, 3)
    X, T = source_randomize_right(Xp, rng)
    assert X == Xp @ T
    rec = transmit("general", params, X, rng)
    assert destination_derandomize(rec.Y, T) == rec.A @ Xp


def test_randomize_right_error_law():
    rng = make_rng(10)
    Z = mat(2, [[1, 0]])
    outcomes = [((0, 1),), ((1, 0),), ((1, 1),)]
    keys = []
    for _ in range(6000):
        _, T = source_randomize_right(mat(2, [[0, 0]]), rng)
        Zp = Z @ mat_inverse(T)
        assert rank(Zp) == 1
        keys.append(key(Zp))
    assert chi2_uniform_pvalue(keys, outcomes) > ALPHA


def test_randomize_right_derandomized_general_law():
    rng = make_rng(11)
    params = P(2, 3, 4, 1)
    Xp = sample_uniform(rng, 3, 4, 2)
    X, T = source_randomize_right(Xp, rng)
    rec = transmit("general", params, X, rng)
    Tinv = mat_inverse(T)
    assert destination_derandomize(rec.Y, T) == rec.A @ Xp + rec.D @ (rec.Z @ Tinv)


@pytest.mark.parametrize("q,n,m,t", [(2, 2, 2, 1), (2, 2, 3, 1), (3, 2, 2, 1), (2, 3, 3, 1)])
def test_general_equals_ammc_exactly(q, n, m, t):
    general = enumerate_channel("general", P(q, n, m, t))
    ammc = enumerate_channel("ammc", P(q, n, m, t))
    assert np.array_equal(general.counts * ammc.denominator, ammc.counts * general.denominator)


def test_general_equals_ammc_empirically():
    rng = make_rng(12)
    params = P(2, 2, 2, 1)
    X = mat(2, [[1, 0], [0, 0]])
    tallies = {}
    for kind in ("general", "ammc"):
        tallies[kind] = Counter(key(transmit(kind, params, X, rng).Y) for _ in range(20_000))
    support = sorted(set(tallies["general"]) | set(tallies["ammc"]))
    table = [[tallies[k].get(s, 0) for s in support] for k in ("general", "ammc")]
    assert chi2_contingency(table).pvalue > ALPHA


def test_general_with_full_rank_errors_matches_w():
    rng = make_rng(13)
    params = P(4, 3, 5, 2)
    for _ in range(200):
        rec = transmit("general", params, sample_uniform(rng, 3, 5, 4), rng)
        W = rec.error_matrix()
        assert rec.W is None and rec.Y == rec.A @ (rec.X + W)
        assert rank(W) == 2


def test_determinism():
    X = sample_full_rank(make_rng(0), 3, 6, 2)
    a = transmit("ammc", P(2, 3, 6, 1), X, make_rng(99))
    b = transmit("ammc", P(2, 3, 6, 1), X, make_rng(99))
    assert a == b
