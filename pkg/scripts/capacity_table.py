"""Print exact capacities and AMMC bounds, normalized per symbol, across field sizes.

    python3 scripts/capacity_table.py --n 4 --m 16 --t 1 2 --q 2 4 16 256
"""

import argparse

from matrixchannels.capacity import capacity_report
from matrixchannels.params import ChannelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--m", type=int, default=16)
    ap.add_argument("--t", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--q", type=int, nargs="+", default=[2, 4, 16, 256])
    ap.add_argument("--epsilon", type=float, default=0.0)
    args = ap.parse_args()

    print(f"{'q':>5} {'t':>3} {'MMC':>8} {'AMC':>8} {'AMMC lo':>8} {'AMMC hi':>8}   (q-ary symbols / nm)")
    nm = args.n * args.m
    for t in args.t:
        for q in args.q:
            p = ChannelParams(q, args.n, args.m, t)
            mmc = capacity_report("mmc", ChannelParams(q, args.n, args.m)).exact / nm
            amc = capacity_report("amc", p).exact / nm
            ammc = capacity_report("ammc", p, epsilon=args.epsilon)
            lo = "" if ammc.lower is None else f"{ammc.lower / nm:.4f}"
            hi = "" if ammc.upper is None else f"{ammc.upper / nm:.4f}"
            print(f"{q:>5} {t:>3} {mmc:>8.4f} {amc:>8.4f} {lo:>8} {hi:>8}")


if __name__ == "__main__":
    main()
