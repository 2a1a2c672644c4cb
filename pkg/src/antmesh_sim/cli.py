"""Command line front end.

    antmesh run <scenario.cfg | preset> [--seeds 1..10] [--sweep k=v1,v2]
                [--jobs N] [--out results.csv] [--trace trace.tsv]
                [--dump-tables dumps.tsv]
    antmesh validate <scenario.cfg>
    antmesh presets

Exit codes: 0 success, 1 a run failed, 2 bad configuration or usage.
"""

import argparse
import math
import os
import sys

from . import metrics
from .runner import csv_row_for, run_experiment
from .scenario import (
    PRESETS,
    SWEEP_KEYS,
    ConfigError,
    _parse_seeds,
    expand_preset,
    parse_scenario,
    validate_scenario,
)


def _load_scenario(arg):
    if os.path.exists(arg):
        label = os.path.splitext(os.path.basename(arg))[0]
        with open(arg) as fh:
            scn = parse_scenario(fh.read(), label=label)
    elif arg in PRESETS:
        scn = expand_preset(arg)
    else:
        raise ConfigError(
            f"{arg!r} is neither a scenario file nor a preset; "
            f"presets: {', '.join(sorted(PRESETS))}")
    problems = validate_scenario(scn)
    if problems:
        raise ConfigError("; ".join(problems))
    return scn


def _parse_sweeps(pairs):
    sweeps = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--sweep wants key=v1,v2,..., got {pair!r}")
        key, _, raw = pair.partition("=")
        key = key.strip()
        if key not in SWEEP_KEYS:
            raise ConfigError(
                f"unknown sweep key {key!r}; known: {', '.join(sorted(SWEEP_KEYS))}")
        values = [v.strip() for v in raw.split(",") if v.strip()]
        if not values:
            raise ConfigError(f"--sweep {key} got no values")
        sweeps[key] = values
    return sweeps


def _cmd_run(args):
    scn = _load_scenario(args.scenario)
    seeds = _parse_seeds(args.seeds, None) if args.seeds else list(scn.run.seeds)
    if not seeds:
        raise ConfigError("no seeds to run")
    sweeps = _parse_sweeps(args.sweep)
    n_runs = len(seeds) * math.prod(len(v) for v in sweeps.values())

    if args.trace or args.dump_tables:
        if n_runs != 1:
            raise ConfigError(
                "--trace/--dump-tables need exactly one run "
                "(one seed, no sweep)")
        from .simulation import Simulation

        trace = open(args.trace, "w") if args.trace else None
        try:
            sim = Simulation(scn, seeds[0], trace=trace)
            ledger = sim.run()
        finally:
            if trace is not None:
                trace.close()
        if args.dump_tables:
            with open(args.dump_tables, "w") as fh:
                for line in sim.table_dumps:
                    fh.write(line + "\n")
        rows = [csv_row_for(scn, seeds[0], ledger)]
    else:
        rows = run_experiment(scn, seeds=seeds, sweeps=sweeps, jobs=args.jobs)

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(metrics.CSV_HEADER + "\n")
            for row in rows:
                fh.write(row + "\n")
    else:
        sys.stdout.write(metrics.CSV_HEADER + "\n")
        for row in rows:
            sys.stdout.write(row + "\n")
    return 0


def _cmd_validate(args):
    try:
        with open(args.scenario) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        scn = parse_scenario(
            text, label=os.path.splitext(os.path.basename(args.scenario))[0])
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    problems = validate_scenario(scn)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return 2
    print(f"ok: {args.scenario}")
    return 0


def _cmd_presets(_args):
    for name in sorted(PRESETS):
        print(f"{name:22s} {PRESETS[name][1]}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="antmesh",
        description="Multi-radio mesh simulator with ant-colony routing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file or preset")
    p_run.add_argument("scenario", help="scenario file path or preset name")
    p_run.add_argument("--seeds", help="e.g. 1..10 or 3,5,8", default=None)
    p_run.add_argument("--sweep", action="append", default=[],
                       metavar="KEY=V1,V2", help="repeatable sweep axis")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default 1)")
    p_run.add_argument("--out", help="write CSV here instead of stdout")
    p_run.add_argument("--trace", help="event trace file (single run only)")
    p_run.add_argument("--dump-tables",
                       help="pheromone table dump file (single run only)")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("scenario")
    p_val.set_defaults(func=_cmd_validate)

    p_pre = sub.add_parser("presets", help="list built-in presets")
    p_pre.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface run failures as code 1
        print(f"run failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
