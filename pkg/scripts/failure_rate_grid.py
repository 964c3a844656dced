"""Empirical trap failure rate next to the exact probability and the bound 2t/q^(1+v-t).

    python3 scripts/failure_rate_grid.py --scheme ammc-trap --trials 5000
"""

import argparse
from fractions import Fraction

from matrixchannels.codec import CodeConfig
from matrixchannels.counting import count_full_rank
from matrixchannels.montecarlo import run_campaign
from matrixchannels.params import ChannelParams


def exact_failure(q, n, m, t, v):
    # the trap fails unless both the top v rows of B and the first v columns of Z keep rank t
    rows = Fraction(count_full_rank(v, t, q) * q ** ((n - v) * t), count_full_rank(n, t, q))
    cols = Fraction(count_full_rank(t, v, q) * q ** (t * (m - v)), count_full_rank(t, m, q))
    return 1 - rows * cols


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scheme", default="ammc-trap", choices=["amc-trap", "ammc-trap"])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--m", type=int, default=16)
    ap.add_argument("--q", type=int, nargs="+", default=[2, 4, 16])
    ap.add_argument("--t", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--extra", type=int, default=3, help="largest v - t")
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'q':>3} {'t':>2} {'v':>2} {'rate':>8} {'95% CI':>19} {'exact':>8} {'bound':>8} {'undet':>5}")
    j = 0
    for q in args.q:
        for t in args.t:
            for v in range(t, t + args.extra + 1):
                cfg = CodeConfig(ChannelParams(q, args.n, args.m, t), v, args.scheme)
                est = run_campaign(cfg, args.trials, args.seed, key=(j,), workers=args.workers)
                j += 1
                exact = float(exact_failure(q, args.n, args.m, t, v))
                ci = f"[{est.ci_low:.4f}, {est.ci_high:.4f}]"
                print(f"{q:>3} {t:>2} {v:>2} {est.rate:>8.4f} {ci:>19} {exact:>8.4f} {est.bound:>8.4f} {est.undetected:>5}")


if __name__ == "__main__":
    main()
