"""Capacities, capacity bounds and limiting expressions of the matrix channels.

Everything is in q-ary units (logarithms to base q) unless a caller converts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from scipy.stats import entropy

from .counting import count_rank_matrices, gaussian_coefficient, log_q_count
from .params import ChannelParams, Variant
from .sampling import validate_pmf


def _log_q(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def capacity_mmc(params: ChannelParams) -> float:
    """log_q of the number of subspaces of GF(q)^m of dimension <= n."""
    q, n, m = params.q, params.n, params.m
    total = sum(gaussian_coefficient(m, k, q) for k in range(min(n, m) + 1))
    return log_q_count(total, q)


class MMCLimits(NamedTuple):
    inf_q: float
    inf_rank_normalized: float
    beyond_half: bool  # lambda > 1/2: values use n* = floor(m/2)


def capacity_mmc_limits(params: ChannelParams) -> MMCLimits:
    n, m = params.n, params.m
    if n == 0:
        return MMCLimits(0.0, 1.0, False)
    if m == 0:
        raise ValueError("limits need m > 0")
    if 2 * n <= m:
        return MMCLimits(float((m - n) * n), 1.0 - n / m, False)
    n_star = m // 2
    inf_q = float((m - n_star) * n_star)
    return MMCLimits(inf_q, inf_q / (n * m), True)


def capacity_amc(params: ChannelParams) -> float:
    q, n, m, t = params.q, params.n, params.m, params.t
    if t > min(n, m):
        raise ValueError(f"t={t} exceeds min(n, m)")
    return n * m - log_q_count(count_rank_matrices(n, m, t, q), q)


class AMCLimits(NamedTuple):
    inf_q: float
    inf_rank_normalized: float
    inf_packet_normalized: float
    inf_batch_normalized: float


def capacity_amc_limits(params: ChannelParams) -> AMCLimits:
    n, m, t = params.n, params.m, params.t
    if t > min(n, m):
        raise ValueError(f"t={t} exceeds min(n, m)")
    if n == 0 or m == 0:
        return AMCLimits(0.0, 1.0, 1.0, 1.0)
    lam, tau = n / m, t / n
    return AMCLimits(
        float((m - t) * (n - t)),
        (1 - lam * tau) * (1 - tau),
        (n - t) / n,
        (m - t) / m,
    )


def ammc_upper_bound(params: ChannelParams) -> float:
    q, n, m, t = params.q, params.n, params.m, params.t
    if 2 * n > m:
        raise ValueError(f"upper bound needs n <= m/2, got n={n}, m={m}")
    return (m - n) * (n - t) + _log_q(4 * (1 + n) * (1 + t), q)


def ammc_lower_bound(params: ChannelParams, epsilon: float = 0.0) -> float:
    """Raw lower bound; may be negative (capacity itself is >= 0)."""
    q, n, m, t = params.q, params.n, params.m, params.t
    if n > m:
        raise ValueError(f"lower bound needs n <= m, got n={n}, m={m}")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    return (m - n) * (n - t - epsilon * t) - _log_q(4, q) - 2 * t * n * m / q ** (1 + epsilon * t)


def epsilon_schedule(m: int) -> float:
    """eps(m) = 1/sqrt(m): 1/eps grows sublinearly, which drives the
    lower bound to the infinite-rank limit."""
    return 1.0 / math.sqrt(m)


class AMMCLimits(NamedTuple):
    inf_q: float
    inf_rank_normalized: float
    inf_packet_normalized: float


def ammc_limits(params: ChannelParams) -> AMMCLimits:
    n, m, t = params.n, params.m, params.t
    if n == 0 or m == 0:
        return AMMCLimits(0.0, 1.0, 1.0)
    lam, tau = n / m, t / n
    return AMMCLimits(float((m - n) * (n - t)), (1 - lam) * (1 - tau), (n - t) / n)


def rank_sum_failure_bound(q: int, n: int, m: int, k: int, t: int) -> float:
    """Upper bound on P[rank(X + W) < k + t] for rank(X) = k, W uniform rank t."""
    if k < 0 or t < 0 or k + t > min(n, m):
        raise ValueError(f"need k + t <= min(n, m), got k={k}, t={t}, n={n}, m={m}")
    return min(1.0, 2 * t / q ** (min(n, m) - k - t + 1))


class RankPenalty(NamedTuple):
    entropy: float  # H(R), q-ary
    cap: float  # log_q(t + 1)


def variable_rank_penalty(pmf: Sequence[float], q: int) -> RankPenalty:
    p = validate_pmf(pmf)
    return RankPenalty(float(entropy(p, base=q)), _log_q(p.size, q))


def low_weight_gain(m: int, s: int, t: int, q: int) -> float:
    """Approximate capacity gain when error packets have weight <= s."""
    if not 0 <= s <= m:
        raise ValueError(f"need 0 <= s <= m, got s={s}, m={m}")
    return (m - s - log_q_count(math.comb(m, s), q)) * t


@dataclass
class CapacityReport:
    variant: Variant
    params: ChannelParams
    exact: float | None = None
    upper: float | None = None
    lower_raw: float | None = None
    lower: float | None = None  # clamped at 0
    epsilon: float | None = None
    limits: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def symbols(self) -> int:
        return self.params.n * self.params.m

    def normalized(self) -> dict[str, float]:
        # values clipped to [0, nm] first: no capacity exceeds log_q |Y| = nm
        nm = self.symbols
        out = {}
        for key in ("exact", "upper", "lower"):
            v = getattr(self, key)
            if v is not None and nm:
                out[key] = min(max(v, 0.0), nm) / nm
        return out

    def to_dict(self, bits: bool = False) -> dict:
        scale = math.log2(self.params.q) if bits else 1.0

        def conv(v):
            return None if v is None else v * scale

        return {
            "variant": self.variant.value,
            "params": self.params.as_dict(),
            "units": "bits" if bits else "q-ary",
            "exact": conv(self.exact),
            "upper": conv(self.upper),
            "lower_raw": conv(self.lower_raw),
            "lower": conv(self.lower),
            "epsilon": self.epsilon,
            "limits": {k: conv(v) for k, v in self.limits.items()},
            "normalized": {k: conv(v) for k, v in self.normalized().items()},
            "lambda": self.params.lam,
            "tau": self.params.tau,
            "notes": list(self.notes),
        }


def capacity_report(
    variant: Variant | str, params: ChannelParams, epsilon: float | None = None
) -> CapacityReport:
    variant = Variant(variant)
    rep = CapacityReport(variant, params)
    if variant is Variant.MMC:
        rep.exact = capacity_mmc(params)
        lim = capacity_mmc_limits(params)
        rep.limits = {"inf_q": lim.inf_q, "inf_rank_normalized": lim.inf_rank_normalized}
        if lim.beyond_half:
            rep.notes.append("lambda > 1/2: limits evaluated at n* = floor(m/2)")
    elif variant is Variant.AMC:
        rep.exact = capacity_amc(params)
        rep.limits = capacity_amc_limits(params)._asdict()
    else:
        n, m = params.n, params.m
        rep.epsilon = 0.0 if epsilon is None else epsilon
        if 2 * n <= m:
            rep.upper = ammc_upper_bound(params)
        else:
            rep.notes.append("upper bound requires n <= m/2")
        if n <= m:
            rep.lower_raw = ammc_lower_bound(params, rep.epsilon)
            rep.lower = max(0.0, rep.lower_raw)
        else:
            rep.notes.append("lower bound requires n <= m")
        rep.limits = ammc_limits(params)._asdict()
        if variant is Variant.GENERAL:
            rep.notes.append("general channel with uniform independent (A, D, Z) is the AMMC")
    return rep
