import math

import pytest
from hypothesis import given, strategies as st

from conftest import mat
from matrixchannels.capacity import (
    ammc_limits,
    ammc_lower_bound,
    ammc_upper_bound,
    capacity_amc,
    capacity_amc_limits,
    capacity_mmc,
    capacity_mmc_limits,
    capacity_report,
    epsilon_schedule,
    low_weight_gain,
    rank_sum_failure_bound,
    variable_rank_penalty,
)
from matrixchannels.field import rank
from matrixchannels.params import ChannelParams, Variant
from matrixchannels.sampling import make_rng, sample_rank_t

P = ChannelParams


def test_mmc_examples():
    assert capacity_mmc(P(2, 1, 1)) == pytest.approx(1.0, abs=1e-12)
    assert capacity_mmc(P(2, 2, 2)) == pytest.approx(math.log2(5), abs=1e-12)
    assert capacity_mmc(P(2, 2, 3)) == pytest.approx(math.log2(15), abs=1e-12)


def test_mmc_limits():
    assert capacity_mmc_limits(P(2, 0, 4)) == (0.0, 1.0, False)
    assert capacity_mmc_limits(P(2, 2, 4)).inf_q == 4
    beyond = capacity_mmc_limits(P(2, 3, 4))
    assert beyond.beyond_half and beyond.inf_q == 4


def test_mmc_sandwich_at_half_load():
    # C = log_2 of 1 + 15 + 35 = 51, within log_2(4 * 3) of (m - n) n = 4
    c = capacity_mmc(P(2, 2, 4))
    assert c == pytest.approx(math.log2(51))
    assert abs(c - 4) <= math.log2(4 * 3)


def test_amc_examples():
    assert capacity_amc(P(3, 2, 5, 0)) == 10
    assert capacity_amc(P(2, 2, 2, 1)) == pytest.approx(4 - math.log2(9), abs=1e-12)
    assert capacity_amc(P(2, 2, 2, 1)) == pytest.approx(0.8301, abs=1e-4)
    assert capacity_amc(P(2, 2, 3, 1)) == pytest.approx(6 - math.log2(21), abs=1e-12)
    assert capacity_amc(P(2, 2, 3, 1)) == pytest.approx(1.6076, abs=1e-4)


def test_amc_rejects_t_beyond_min_dimension():
    with pytest.raises(ValueError):
        capacity_amc(P(2, 3, 2, 3))


def test_amc_limits():
    assert capacity_amc_limits(P(2, 2, 4, 0)) == (8.0, 1.0, 1.0, 1.0)
    lim = capacity_amc_limits(P(2, 2, 4, 1))
    assert lim.inf_q == 3
    assert lim.inf_packet_normalized == pytest.approx(0.5)
    assert lim.inf_batch_normalized == pytest.approx(0.75)


def test_ammc_upper_examples():
    assert ammc_upper_bound(P(2, 2, 4, 1)) == pytest.approx(2 + math.log2(24))
    assert ammc_upper_bound(P(2, 2, 4, 1)) == pytest.approx(6.585, abs=1e-3)
    # t = n leaves only the log term
    assert ammc_upper_bound(P(3, 2, 4, 2)) == pytest.approx(math.log(4 * 9, 3))
    # the log term vanishes as q grows
    gaps = [ammc_upper_bound(P(q, 2, 4, 1)) - 2 for q in (2, 16, 256, 65536)]
    assert gaps == sorted(gaps, reverse=True) and gaps[-1] < 0.5
    with pytest.raises(ValueError):
        ammc_upper_bound(P(2, 3, 5, 1))


def test_ammc_lower_examples():
    assert ammc_lower_bound(P(2, 2, 4, 1), 0.0) == pytest.approx(-8.0)
    assert ammc_lower_bound(P(4, 2, 6, 0), 0.0) == pytest.approx(8 - 1)
    assert epsilon_schedule(16) == 0.25
    with pytest.raises(ValueError):
        ammc_lower_bound(P(2, 3, 2, 1))
    with pytest.raises(ValueError):
        ammc_lower_bound(P(2, 2, 4, 1), -0.1)


def test_ammc_lower_approaches_limit_with_schedule():
    # with eps = 1/sqrt(m), the normalized lower bound tends to (1 - lam)(1 - tau)
    target = (1 - 0.25) * (1 - 0.5)
    vals = []
    for m in (16, 64, 256, 1024, 4096):
        p = P(16, m // 4, m, m // 8)
        vals.append(ammc_lower_bound(p, epsilon_schedule(m)) / (p.n * p.m))
    assert all(a < b < target for a, b in zip(vals, vals[1:]))
    assert target - vals[-1] < 0.01


def test_ammc_limits():
    assert ammc_limits(P(2, 2, 4, 1)).inf_q == 2
    assert ammc_limits(P(2, 4, 8, 2)).inf_rank_normalized == pytest.approx(0.25)
    for n, m in [(1, 4), (2, 4), (3, 9)]:
        mm = capacity_mmc_limits(P(2, n, m))
        am = ammc_limits(P(2, n, m, 0))
        assert am.inf_q == mm.inf_q and am.inf_rank_normalized == pytest.approx(mm.inf_rank_normalized)


def test_rank_sum_bound_examples():
    assert rank_sum_failure_bound(2, 4, 4, 1, 0) == 0
    assert rank_sum_failure_bound(2, 4, 4, 1, 1) == 0.25
    assert rank_sum_failure_bound(2, 2, 2, 1, 1) == 1.0
    with pytest.raises(ValueError):
        rank_sum_failure_bound(2, 3, 3, 2, 2)


def test_rank_sum_bound_monte_carlo():
    rng = make_rng(123)
    X = mat(2, [[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    trials = 100_000
    low = sum(rank(X + sample_rank_t(rng, 3, 3, 1, 2)[0]) < 2 for _ in range(trials))
    assert low / trials < rank_sum_failure_bound(2, 3, 3, 1, 1) == 0.5


def test_variable_rank_penalty():
    assert variable_rank_penalty([0, 0, 1], 2).entropy == 0
    pen = variable_rank_penalty([1 / 3] * 3, 3)
    assert pen.entropy == pytest.approx(1.0) and pen.cap == pytest.approx(1.0)
    assert variable_rank_penalty([0.5, 0.5], 2).entropy == pytest.approx(1.0)
    with pytest.raises(ValueError):
        variable_rank_penalty([0.7, 0.7], 2)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=6).filter(lambda p: sum(p) > 0.1), st.sampled_from([2, 3, 16]))
def test_penalty_entropy_below_cap(weights, q):
    total = sum(weights)
    pen = variable_rank_penalty([w / total for w in weights], q)
    assert -1e-12 <= pen.entropy <= pen.cap + 1e-12


def test_low_weight_gain():
    assert low_weight_gain(8, 8, 3, 2) == 0
    assert low_weight_gain(8, 2, 0, 2) == 0
    assert low_weight_gain(8, 1, 1, 2) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        low_weight_gain(3, 4, 1, 2)


@given(
    st.sampled_from([2, 3, 4, 16, 256]),
    st.integers(1, 8),
    st.data(),
    st.floats(0, 3),
)
def test_ammc_sandwich(q, n, data, eps):
    m = data.draw(st.integers(2 * n, 2 * n + 10))
    t = data.draw(st.integers(0, n))
    p = P(q, n, m, t)
    assert ammc_lower_bound(p, eps) <= ammc_upper_bound(p)


@pytest.mark.parametrize("q", [2, 3, 4, 16])
def test_amc_strictly_decreasing_in_t(q):
    # the one exception: over GF(2) a square matrix is less often full rank
    # than one short of it (6 vs 9 at n = m = 2), so the last step goes up
    # (or stays flat at n = m = 1)
    for n in range(1, 9):
        for m in range(1, 9):
            caps = [capacity_amc(P(q, n, m, t)) for t in range(min(n, m) + 1)]
            for t in range(len(caps) - 1):
                if q == 2 and n == m and t == n - 1:
                    assert caps[t] <= caps[t + 1]
                else:
                    assert caps[t] > caps[t + 1]


def test_convergence_in_field_size():
    amc = [abs(capacity_amc(P(q, 2, 4, 1)) - 3) for q in (2, 256)]
    mmc = [abs(capacity_mmc(P(q, 2, 4)) - 4) for q in (2, 256)]
    assert amc[1] < amc[0] and mmc[1] < mmc[0]
    assert amc[1] < 0.1 and mmc[1] < 0.1


@given(st.integers(1, 10), st.data())
def test_normalized_limit_consistency(n, data):
    m = data.draw(st.integers(2 * n, 30))
    t = data.draw(st.integers(0, n))
    nm = n * m
    amc = capacity_amc_limits(P(2, n, m, t))
    assert amc.inf_q / nm == pytest.approx(amc.inf_rank_normalized)
    ammc = ammc_limits(P(2, n, m, t))
    assert ammc.inf_q / nm == pytest.approx(ammc.inf_rank_normalized)
    mmc = capacity_mmc_limits(P(2, n, m))
    assert mmc.inf_q / nm == pytest.approx(mmc.inf_rank_normalized)


def test_report_shapes_and_units():
    rep = capacity_report("amc", P(2, 2, 2, 1))
    assert rep.exact == pytest.approx(0.8301, abs=1e-4)
    assert 0 <= rep.normalized()["exact"] <= 1
    rep = capacity_report(Variant.AMMC, P(2, 2, 4, 1), epsilon=0.0)
    assert rep.lower_raw == pytest.approx(-8) and rep.lower == 0
    assert rep.lower <= rep.upper
    d4 = capacity_report("mmc", P(4, 2, 2)).to_dict(bits=True)
    assert d4["units"] == "bits"
    assert d4["exact"] == pytest.approx(2 * capacity_mmc(P(4, 2, 2)))
    rep = capacity_report("ammc", P(2, 3, 4, 1))
    assert rep.upper is None and rep.lower is not None and rep.notes
