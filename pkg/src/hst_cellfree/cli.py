"""Command-line entry point: ``hst-se <subcommand>``.

Subcommands
-----------
verify       closed forms against the brute-force oracle
sweep        SE against one parameter, CSV output
table1       largest / smallest SE and drop percentage per scheme
ici-dump     ICI kernel leakage powers, CSV
layout-dump  AP / TA / BS coordinates, CSV

Every config key can be overridden with ``--set key=value`` (TOML value
syntax, e.g. ``--set tx_power_dbm=23``); overrides win over ``--config``.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import __version__
from .config import ConfigError, SystemConfig, config_from_mapping, load_config, tomllib
from .experiments import SYSTEMS, VARIABLES, SweepSpec, run_sweep, table1, table1_csv
from .geometry import build_layout, ta_positions
from .ici import ici_row
from .oracle import run_verification


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, _, raw = item.partition("=")
        try:
            value = tomllib.loads(f"v = {raw}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw
        out[key.strip()] = value
    return out


def _config(args) -> SystemConfig:
    base = load_config(args.config) if args.config else SystemConfig()
    overrides = _parse_overrides(args.set)
    if args.seed is not None:
        overrides["seed"] = args.seed
    return config_from_mapping(overrides, base=base) if overrides else base


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_verify(args) -> int:
    report = run_verification(trials=args.trials, seed=args.seed or 0)
    worst = max(report["max_rel_err"].values())
    for name, err in report["max_rel_err"].items():
        print(f"  {name:22s} max rel err {err:.3e}")
    print(f"  {'ici power sum':22s} max abs err {report['ici_power_err']:.3e}")
    print(f"  {'dft consistency':22s} max abs err {report['dft_err']:.3e}")
    status = "PASS" if report["passed"] else "FAIL"
    print(f"{status}, max rel err {worst:.3e} (limit 1e-9) over {args.trials} instances")
    return 0 if report["passed"] else 1


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if args.values:
        values = [float(v) for v in args.values.split(",")]
    else:
        if args.start is None or args.stop is None:
            raise ConfigError("sweep needs --values or --from/--to")
        values = [float(v) for v in np.linspace(args.start, args.stop, args.steps)]
    systems = args.systems.split(",") if args.systems else list(SYSTEMS)
    result = run_sweep(SweepSpec(args.variable, values, systems, cfg))
    _write(result.to_csv(), args.output)
    return 0


def cmd_table1(args) -> int:
    cfg = _config(args)
    rows = table1(cfg, num_layouts=args.layouts)
    _write(table1_csv(rows), args.output)
    if args.output not in (None, "-"):
        print(f"{'scheme':12s} {'L':>3s} {'d_ve':>6s} {'largest':>8s} {'smallest':>9s} {'drop':>6s}")
        for r in rows:
            print(f"{r.system:12s} {r.num_aps:3d} {r.vertical_distance_m:6.0f} "
                  f"{r.largest_se:8.3f} {r.smallest_se:9.3f} {100 * r.drop:5.1f}%")
    return 0


def cmd_ici_dump(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["eps", "s", "m", "power"])
    targets = [args.s] if args.s else range(1, args.M + 1)
    for s in targets:
        row = ici_row(args.eps, s, args.M)
        for m, c in enumerate(row.coeffs, start=1):
            writer.writerow([repr(args.eps), s, m, repr(float(abs(c) ** 2))])
    _write(buf.getvalue(), args.output)
    return 0


def cmd_layout_dump(args) -> int:
    cfg = _config(args)
    layout = build_layout(cfg)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "x", "y", "role"])
    for i, (x, y) in enumerate(layout.ap_positions, start=1):
        writer.writerow([i, repr(float(x)), repr(float(y)), "ap"])
    for i, (x, y) in enumerate(ta_positions(layout, args.n, cfg.step_distance_m), start=1):
        writer.writerow([i, repr(float(x)), repr(float(y)), "ta"])
    x, y = layout.bs_position
    writer.writerow([1, repr(float(x)), repr(float(y)), "bs"])
    _write(buf.getvalue(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hst-se", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", help="TOML config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    p = sub.add_parser("verify", help="check closed forms against the oracle")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    with_config(p)
    p.add_argument("--variable", choices=VARIABLES, required=True)
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--values", help="comma-separated values instead of --from/--to")
    p.add_argument("--systems", help=f"comma-separated subset of {','.join(SYSTEMS)}")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table1", help="SE range and drop percentage per scheme")
    with_config(p)
    p.add_argument("--layouts", type=int, default=1,
                   help="average over this many random AP layouts")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("ici-dump", help="ICI leakage powers |I[m-s]|^2")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--M", type=int, default=64)
    p.add_argument("--s", type=int, default=None, help="single target subcarrier")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_ici_dump)

    p = sub.add_parser("layout-dump", help="node coordinates")
    with_config(p)
    p.add_argument("--n", type=int, default=0, help="train position index")
    p.set_defaults(func=cmd_layout_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
