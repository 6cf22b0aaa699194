"""Command-line entry point ``structsing``.

    structsing gen --kind {toeplitz|sparse} --n N [--p P] --seed S --out FILE
    structsing solve --config FILE [--seed S]
    structsing bench --config FILE [--seed S]
    structsing verify [--seed S]

``solve`` prints one JSON object and exits 0 when the solver converged, 2 when
it stopped unconverged, and 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .algorithms import solve
from .bench import records_path, run_bench
from .config import ConfigError, build_basis, load_config, read_matrix, write_matrix
from .generators import gen_sparse, gen_toeplitz
from .structures import make_instance
from .verify import format_report, run_verify

EXIT_OK, EXIT_INPUT, EXIT_UNCONVERGED = 0, 1, 2


def run_solve(cfg):
    """Solve the instance named by ``cfg``; returns ``(record, exit_code)``."""
    A, stored = read_matrix(cfg.matrix_path)
    basis = build_basis(cfg.structure, A.shape[0], stored, where=str(cfg.source))
    try:
        inst = make_instance(A, basis)
    except ValueError as exc:
        raise ConfigError(f"{cfg.matrix_path}: {exc}") from exc
    res = solve(inst, cfg.solver)
    record = {
        "distance": res.distance,
        "constraint_violation": res.constraint_violation,
        "inner_iterations": res.inner_iterations_total,
        "outer_iterations": res.outer_iterations,
        "wall_time_s": res.wall_time,
        "converged": bool(res.converged),
        "algorithm": res.algorithm,
        "strategy": res.strategy,
    }
    return record, EXIT_OK if res.converged else EXIT_UNCONVERGED


def _cmd_gen(args):
    if args.kind == "toeplitz":
        write_matrix(args.out, gen_toeplitz(args.n, args.seed))
    else:
        A, pattern = gen_sparse(args.n, args.p, args.seed)
        write_matrix(args.out, A, pattern)
    return EXIT_OK


def _with_seed(cfg, seed):
    if seed is None:
        return cfg
    cfg.solver = replace(cfg.solver, seed=seed)
    if cfg.bench is not None:
        cfg.bench.seed = seed
    return cfg


def _cmd_solve(args):
    cfg = _with_seed(load_config(args.config, "solve"), args.seed)
    record, code = run_solve(cfg)
    print(json.dumps(record))
    return code


def _cmd_bench(args):
    cfg = _with_seed(load_config(args.config, "bench"), args.seed)
    rows, _ = run_bench(cfg)
    for row in rows:
        print(
            f"n={row['size']:<5d} median distance {row['median_distance']:.6g}  "
            f"iterations {row['median_iterations']:g}  time {row['median_time_s']:.3g}s"
        )
    print(f"wrote {cfg.bench.output} and {records_path(cfg.bench.output)}")
    return EXIT_OK


def _cmd_verify(args):
    results = run_verify(seed=args.seed, inject_fault=args.inject_fault)
    print(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_INPUT


def build_parser():
    ap = argparse.ArgumentParser(prog="structsing", description="Structured distance to singularity.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random test matrix (MatrixMarket)")
    g.add_argument("--kind", choices=("toeplitz", "sparse"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, default=0.4, help="nonzero probability (sparse)")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="solve one instance, print a JSON record")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark campaign, write CSV")
    b.add_argument("--config", required=True)
    b.add_argument("--seed", type=int, default=None, help="base seed (overrides [bench] seed)")
    b.set_defaults(func=_cmd_bench)

    v = sub.add_parser("verify", help="run the randomized invariant suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        if args.n < 2:
            print("structsing: error: --n must be at least 2", file=sys.stderr)
            return EXIT_INPUT
        if not 0.0 < args.p <= 1.0:
            print("structsing: error: --p must lie in (0, 1]", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"structsing: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"structsing: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
