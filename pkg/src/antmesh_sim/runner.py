"""Experiment driver: sweep grids x seed batches, optionally across worker
processes, collected into one CSV. Row order is fixed (sweep point, then
seed) regardless of worker count, so identical inputs give identical files."""

import concurrent.futures as cf
import itertools

from . import metrics
from .scenario import apply_sweep_point, parse_scenario, serialize_scenario
from .simulation import Simulation


def run_one(scn, seed, trace=None):
    """One seeded run; returns the finalized metrics ledger."""
    return Simulation(scn, seed, trace=trace).run()


def csv_row_for(scn, seed, ledger):
    mob = scn.mobility
    speed = mob.speed_mps if mob.enabled else 0.0
    fraction = mob.mobile_fraction if mob.enabled else 0.0
    return metrics.csv_row(
        scn.label, scn.routing.routing, seed, scn.routing.p0,
        scn.routing.ant_rate, len(scn.flows), speed, fraction, ledger)


def expand_runs(base, sweeps, seeds):
    """[(scenario, seed)] over the sweep grid, in deterministic order."""
    keys = sorted(sweeps)
    if keys:
        points = [dict(zip(keys, combo))
                  for combo in itertools.product(*(sweeps[k] for k in keys))]
    else:
        points = [{}]
    runs = []
    for point in points:
        scn = apply_sweep_point(base, point) if point else base
        for seed in seeds:
            runs.append((scn, seed))
    return runs


def _run_task(task):
    text, label, seed = task
    scn = parse_scenario(text, label=label)
    return csv_row_for(scn, seed, run_one(scn, seed))


def run_experiment(base, seeds=None, sweeps=None, jobs=1, out=None):
    """Run the full grid; returns the CSV rows (header excluded).

    Workers receive the scenario in its canonical text form and re-parse it,
    so results cannot depend on process-local state.
    """
    seeds = list(seeds) if seeds is not None else list(base.run.seeds)
    runs = expand_runs(base, sweeps or {}, seeds)
    if jobs <= 1 or len(runs) == 1:
        rows = [csv_row_for(scn, seed, run_one(scn, seed))
                for scn, seed in runs]
    else:
        tasks = [(serialize_scenario(scn), scn.label, seed)
                 for scn, seed in runs]
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_task, tasks))
    if out is not None:
        with open(out, "w") as fh:
            fh.write(metrics.CSV_HEADER + "\n")
            for row in rows:
                fh.write(row + "\n")
    return rows
