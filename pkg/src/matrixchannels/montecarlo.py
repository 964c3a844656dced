"""Seeded Monte Carlo campaigns: encode -> channel -> decode, tallied per outcome."""

from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from scipy.stats import binomtest

from .capacity import capacity_report
from .channels import ChannelVariant, transmit
from .codec import (
    CodeConfig,
    Scheme,
    classify,
    decode,
    decode_variable_rank,
    encode,
    failure_probability_bound,
)
from .params import ChannelParams, Variant
from .sampling import fork_rng, sample_uniform

CHANNEL_FOR_SCHEME = {
    Scheme.AMC_TRAP: Variant.AMC,
    Scheme.AMMC_TRAP: Variant.AMMC,
    Scheme.MMC_PILOT: Variant.MMC,
}


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


@dataclass
class MCEstimate:
    scheme: str
    params: dict
    v: int
    trials: int
    successes: int
    failures: int
    undetected: int
    rate: float  # (failures + undetected) / trials
    ci_low: float
    ci_high: float
    bound: float
    seed: int
    rank_pmf: Optional[list] = None
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        assert self.successes + self.failures + self.undetected == self.trials

    @property
    def bound_ok(self) -> bool:
        return self.rate <= self.bound

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("wall_time")
        return d


def _run_trials(config: CodeConfig, variant: ChannelVariant, seed: int, key: tuple, indices: Iterable[int]):
    tally = {"success": 0, "failure": 0, "undetected": 0}
    dec = decode_variable_rank if variant.variable_rank else decode
    rows, cols = config.data_shape
    for i in indices:
        rng = fork_rng(seed, *key, i)
        U = sample_uniform(rng, rows, cols, config.field)
        rec = transmit(variant, config.params, encode(config, U), rng)
        tally[classify(dec(config, rec.Y), U)] += 1
    return tally


def _chunk(args):
    return _run_trials(*args)


def run_campaign(
    config: CodeConfig,
    trials: int,
    seed: int = 0,
    rank_pmf: Sequence[float] | None = None,
    channel: ChannelVariant | None = None,
    key: tuple = (),
    workers: int = 1,
) -> MCEstimate:
    """Run ``trials`` independent trials; trial i draws everything from
    ``fork_rng(seed, *key, i)`` so results do not depend on ``workers``."""
    if channel is None:
        channel = ChannelVariant(
            CHANNEL_FOR_SCHEME[config.scheme],
            rank_pmf=tuple(rank_pmf) if rank_pmf is not None else None,
        )
    channel.validate(config.params)
    start = time.perf_counter()
    if workers > 1 and trials > workers:
        bounds = [trials * w // workers for w in range(workers + 1)]
        jobs = [(config, channel, seed, key, range(a, b)) for a, b in zip(bounds, bounds[1:])]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_chunk, jobs))
        tally = {k: sum(p[k] for p in parts) for k in parts[0]}
    else:
        tally = _run_trials(config, channel, seed, key, range(trials))
    bad = tally["failure"] + tally["undetected"]
    lo, hi = wilson_interval(bad, trials)
    bound = 0.0 if config.scheme is Scheme.MMC_PILOT else failure_probability_bound(
        config.params.q, config.params.t, config.v
    )
    return MCEstimate(
        scheme=config.scheme.value,
        params=config.params.as_dict(),
        v=config.v,
        trials=trials,
        successes=tally["success"],
        failures=tally["failure"],
        undetected=tally["undetected"],
        rate=bad / trials if trials else 0.0,
        ci_low=lo,
        ci_high=hi,
        bound=bound,
        seed=seed,
        rank_pmf=list(channel.rank_pmf) if channel.rank_pmf is not None else None,
        wall_time=time.perf_counter() - start,
    )


# -- sweeps -----------------------------------------------------------------

SWEEP_COLUMNS = [
    "scheme", "q", "n", "m", "t", "v", "code_rate", "capacity", "upper", "lower",
    "trials", "successes", "failures", "undetected", "empirical_rate",
    "ci_low", "ci_high", "bound",
]


@dataclass
class SweepSpec:
    """Grid over (q, n, m, t, v).  ``v_offsets`` adds v = t + offset points
    on top of any absolute ``v`` values."""

    scheme: Scheme
    q: list[int]
    n: list[int]
    m: list[int]
    t: list[int]
    v: list[int] = field(default_factory=list)
    v_offsets: list[int] = field(default_factory=list)
    trials: int = 1000
    seed: int = 0
    rank_pmf: Optional[str] = None  # None (fixed rank) or "uniform"

    def points(self) -> list[CodeConfig]:
        """Every grid point as a validated config; raises before any run."""
        out = []
        for q, n, m, t in itertools.product(self.q, self.n, self.m, self.t):
            vs = list(self.v) + [t + d for d in self.v_offsets]
            if Scheme(self.scheme) is Scheme.MMC_PILOT:
                vs = vs[:1] or [0]
            for v in vs:
                out.append(CodeConfig(ChannelParams(q, n, m, t), v, self.scheme))
        return out


def _capacity_columns(config: CodeConfig) -> dict:
    p = config.params
    variant = CHANNEL_FOR_SCHEME[config.scheme]
    if variant is Variant.MMC:
        p = ChannelParams(p.q, p.n, p.m, 0)
    rep = capacity_report(variant, p)
    return {"capacity": rep.exact, "upper": rep.upper, "lower": rep.lower}


def run_sweep(spec: SweepSpec) -> list[dict]:
    points = spec.points()
    rows = []
    for j, cfg in enumerate(points):
        pmf = None
        if spec.rank_pmf == "uniform":
            pmf = [1.0 / (cfg.params.t + 1)] * (cfg.params.t + 1)
        est = run_campaign(cfg, spec.trials, spec.seed, rank_pmf=pmf, key=(j,))
        p = cfg.params
        rows.append({
            "scheme": cfg.scheme.value, "q": p.q, "n": p.n, "m": p.m, "t": p.t, "v": cfg.v,
            "code_rate": cfg.rate, **_capacity_columns(cfg),
            "trials": est.trials, "successes": est.successes, "failures": est.failures,
            "undetected": est.undetected, "empirical_rate": est.rate,
            "ci_low": est.ci_low, "ci_high": est.ci_high, "bound": est.bound,
        })
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()
