"""Command-line front end.

Exit codes: 0 ok, 2 invalid configuration, 3 bound violated under
--check-bound, 4 oracle refused an instance that is too large.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .capacity import capacity_report
from .channels import ChannelVariant, transmit
from .codec import CodeConfig, Scheme, encode
from .montecarlo import CHANNEL_FOR_SCHEME, MCEstimate, SweepSpec, rows_to_csv, run_campaign, run_sweep
from .oracle import ConvergenceError, OracleTooLarge, oracle_report
from .params import ChannelParams, Variant
from .sampling import fork_rng, sample_uniform

EXIT_OK, EXIT_CONFIG, EXIT_BOUND, EXIT_GUARD = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get("MCL_SEED")
    return int(env) if env else 0


def _rank_pmf(spec: str | None, t: int):
    if spec is None or spec == "fixed":
        return None
    if spec == "uniform":
        return [1.0 / (t + 1)] * (t + 1)
    return [float(x) for x in spec.split(",")]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _params(args) -> ChannelParams:
    return ChannelParams(args.q, args.n, args.m, args.t)


def cmd_capacity(args) -> int:
    params = _params(args)
    rep = capacity_report(args.variant, params, epsilon=args.epsilon)
    print(_dump(rep.to_dict(bits=args.bits)))
    return EXIT_OK


def _estimate_csv(est: MCEstimate) -> str:
    d = est.to_dict()
    d.update(d.pop("params"))
    d.pop("rank_pmf")
    keys = list(d)
    return ",".join(keys) + "\n" + ",".join(repr(d[k]) if isinstance(d[k], float) else str(d[k]) for k in keys) + "\n"


def cmd_simulate(args) -> int:
    params = _params(args)
    config = CodeConfig(params, args.v if args.v is not None else params.t, args.scheme)
    pmf = _rank_pmf(args.rank_pmf, params.t)
    est = run_campaign(config, args.trials, _seed(args), rank_pmf=pmf, workers=args.workers)
    if args.format == "csv":
        sys.stdout.write(_estimate_csv(est))
    else:
        print(_dump(est.to_dict(timing=args.timing)))
    if args.check_bound and not est.bound_ok:
        print(f"bound violated: empirical rate {est.rate} > {est.bound}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        scheme=Scheme(args.scheme),
        q=_int_list(args.q),
        n=_int_list(args.n),
        m=_int_list(args.m),
        t=_int_list(args.t),
        v=_int_list(args.v) if args.v is not None else [],
        v_offsets=_int_list(args.v_offsets) if args.v_offsets is not None else [],
        trials=args.trials,
        seed=_seed(args),
        rank_pmf=args.rank_pmf if args.rank_pmf not in (None, "fixed") else None,
    )
    if spec.scheme is not Scheme.MMC_PILOT and not spec.v and not spec.v_offsets:
        spec.v_offsets = [0]
    spec.points()  # validate the whole grid before running anything
    rows = run_sweep(spec)
    text = _dump(rows) + "\n" if args.format == "json" else rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.check_bound and any(r["empirical_rate"] > r["bound"] for r in rows if r["scheme"] != "mmc-pilot"):
        print("bound violated at one or more grid points", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_oracle(args) -> int:
    params = _params(args)
    try:
        rep = oracle_report(args.variant, params, tolerance=args.tolerance)
    except OracleTooLarge as exc:
        print(f"refusing: {exc}", file=sys.stderr)
        return EXIT_GUARD
    print(_dump(rep))
    return EXIT_OK


def cmd_gen_fixtures(args) -> int:
    params = _params(args)
    config = CodeConfig(params, args.v if args.v is not None else params.t, args.scheme)
    variant = ChannelVariant(CHANNEL_FOR_SCHEME[config.scheme], rank_pmf=_rank_pmf(args.rank_pmf, params.t))
    out = Path(args.output or "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    seed = _seed(args)
    manifest = {"scheme": config.scheme.value, "params": params.as_dict(), "v": config.v, "seed": seed, "trials": []}
    for i in range(args.count):
        rng = fork_rng(seed, i)
        U = sample_uniform(rng, *config.data_shape, config.field)
        rec = transmit(variant, params, encode(config, U), rng)
        names = {}
        for tag, M in (("U", U), ("X", rec.X), ("Y", rec.Y)):
            name = f"trial{i:04d}_{tag}.txt"
            (out / name).write_text(M.to_text())
            names[tag] = name
        manifest["trials"].append({"index": i, "error_rank": rec.rank, **names})
    (out / "manifest.json").write_text(_dump(manifest) + "\n")
    print(f"wrote {args.count} fixture triples to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matrixchannels", description="Finite-field matrix channels: capacities, codes, simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common():
        # built per subcommand: parents share action objects, so one shared
        # parent would leak set_defaults between subcommands
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--config", help="JSON file whose keys mirror the command-line flags")
        c.add_argument("--seed", type=int, default=None, help="master seed (falls back to $MCL_SEED, then 0)")
        c.add_argument("--format", choices=["json", "csv"], default="json")
        return [c]

    def point(p, lists=False):
        kind = str if lists else int
        p.add_argument("-q", type=kind, default="2" if lists else 2, help="field order")
        p.add_argument("-n", type=kind, default="2" if lists else 2, help="packets per batch")
        p.add_argument("-m", type=kind, default="2" if lists else 2, help="symbols per packet")
        p.add_argument("-t", type=kind, default="0" if lists else 0, help="error packets")

    p = sub.add_parser("capacity", parents=common(), help="capacity / bound report")
    point(p)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="ammc")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--bits", action="store_true", help="report in bits instead of q-ary units")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("simulate", parents=common(), help="Monte Carlo failure-rate campaign")
    point(p)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="ammc-trap")
    p.add_argument("-v", type=int, default=None, help="trap size (default t)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--rank-pmf", default=None, help="fixed | uniform | comma-separated pmf over 0..t")
    p.add_argument("--check-bound", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall time (output no longer reproducible)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=common(), help="grid of campaigns, CSV rows")
    point(p, lists=True)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="ammc-trap")
    p.add_argument("-v", default=None, help="absolute trap sizes, e.g. 2,3 or 2..5")
    p.add_argument("--v-offsets", default=None, help="trap sizes relative to t, e.g. 0..3")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--rank-pmf", choices=["fixed", "uniform"], default=None)
    p.add_argument("--check-bound", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_sweep, format="csv")

    p = sub.add_parser("oracle", parents=common(), help="Blahut-Arimoto on the enumerated channel")
    point(p)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="amc")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-fixtures", parents=common(), help="write U/X/Y matrix text fixtures")
    point(p)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="ammc-trap")
    p.add_argument("-v", type=int, default=None)
    p.add_argument("--rank-pmf", default=None)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen_fixtures)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    # explicit flags win: re-parse with config values as defaults
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = set(cfg) - known - {"command"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    sub.set_defaults(**{k: (",".join(map(str, v)) if isinstance(v, list) else v) for k, v in cfg.items() if k in known})
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
