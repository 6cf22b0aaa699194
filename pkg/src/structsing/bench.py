"""Statistical benchmark campaigns over random Toeplitz or sparse matrices.

Sample s of every size uses seed ``base_seed + s``. Records are sorted by
(size, sample index) before writing, so the worker count never changes the
output. Two CSV files are written:

* ``output``: one row per size with columns ``size, median_distance,
  median_iterations, median_time_s`` (iterations are total inner iterations);
* ``<stem>_records.csv`` next to it: one row per sample with the
  :class:`BenchRecord` fields in declaration order.
"""

from __future__ import annotations

import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algorithms import SolverConfig, solve
from .generators import gen_sparse, gen_toeplitz
from .structures import make_instance, sparse_pattern_basis, toeplitz_basis

SUMMARY_COLUMNS = ("size", "median_distance", "median_iterations", "median_time_s")


@dataclass(frozen=True)
class BenchRecord:
    n: int
    sample_index: int
    seed: int
    distance: float
    inner_iterations: int
    outer_iterations: int
    constraint_violation: float
    converged: bool
    wall_time_s: float
    strategy: str
    algorithm: str


RECORD_COLUMNS = tuple(f.name for f in dataclasses.fields(BenchRecord))


def make_sample(kind: str, n: int, seed: int, p: float = 0.4):
    """Problem instance for one benchmark sample."""
    if kind == "toeplitz":
        return make_instance(gen_toeplitz(n, seed), toeplitz_basis(n))
    A, pattern = gen_sparse(n, p, seed)
    return make_instance(A, sparse_pattern_basis(pattern, n=n))


def run_sample(kind, n, sample_index, seed, p, solver: SolverConfig) -> BenchRecord:
    inst = make_sample(kind, n, seed, p)
    res = solve(inst, solver)
    return BenchRecord(
        n=n,
        sample_index=sample_index,
        seed=seed,
        distance=res.distance,
        inner_iterations=res.inner_iterations_total,
        outer_iterations=res.outer_iterations,
        constraint_violation=res.constraint_violation,
        converged=res.converged,
        wall_time_s=res.wall_time,
        strategy=res.strategy,
        algorithm=res.algorithm,
    )


def _run_task(args):
    return run_sample(*args)


def collect(sizes, samples, kind, solver, seed=0, p=0.4, workers=1):
    """Run every (size, sample) pair; returns records sorted by (n, sample)."""
    tasks = [
        (kind, int(n), s, seed + s, p, solver) for n in sizes for s in range(samples)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        records = [_run_task(t) for t in tasks]
    return sorted(records, key=lambda r: (r.n, r.sample_index))


def summarize(records):
    """Per-size medians, ordered by size."""
    rows = []
    for n in sorted({r.n for r in records}):
        sub = [r for r in records if r.n == n]
        rows.append(
            {
                "size": n,
                "median_distance": float(np.median([r.distance for r in sub])),
                "median_iterations": float(np.median([r.inner_iterations for r in sub])),
                "median_time_s": float(np.median([r.wall_time_s for r in sub])),
            }
        )
    return rows


def records_path(output) -> Path:
    output = Path(output)
    return output.with_name(output.stem + "_records" + (output.suffix or ".csv"))


def write_csvs(output, records):
    output = Path(output)
    rows = summarize(records)
    with open(output, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    with open(records_path(output), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow(
                [repr(x) if isinstance(x, float) else x for x in dataclasses.astuple(r)]
            )
    return rows


def run_bench(cfg):
    """Run the campaign described by a bench :class:`RunConfig`."""
    b = cfg.bench
    records = collect(b.sizes, b.samples, b.kind, cfg.solver, seed=b.seed, p=b.p, workers=b.workers)
    try:
        rows = write_csvs(b.output, records)
    except OSError as exc:
        raise OSError(f"{b.output}: cannot write benchmark output ({exc.strerror})") from exc
    return rows, records
