"""Command-line sweep over St(n, p) endpoint problems.

Example::

    stiefel-log-bench --n 500 --p 2,4,8,16 --tol 1e-3 --trials 100 --format table

Exit status is 0 for a complete sweep, 2 when some (n, p) cell could not be
run, and 1 when the report cannot be written.
"""
import argparse
import math
import sys

from .bench import ExperimentConfig, emit, run_experiment


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _distance(text):
    """A float, optionally written as a multiple of pi (``0.5pi``, ``pi``)."""
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            coef = t[:-2].rstrip("*")
            return (float(coef) if coef else 1.0) * math.pi
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a distance: {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stiefel-log-bench",
        description="Average iteration counts and times of the single-shooting "
                    "Stiefel logarithm on planted endpoint pairs.")
    parser.add_argument("--n", type=_int_list, required=True,
                        help="ambient dimensions, comma separated")
    parser.add_argument("--p", type=_int_list, required=True,
                        help="column counts, comma separated")
    parser.add_argument("--distance", type=_distance, default=0.5 * math.pi,
                        help="prescribed geodesic distance (default 0.5pi)")
    parser.add_argument("--tol", type=float, default=1e-5)
    parser.add_argument("--max-iter", type=int, default=100)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--small", action=argparse.BooleanOptionalAction, default=True,
                        help="use the St(2p,p) reduction when p < n/2")
    parser.add_argument("--format", choices=("csv", "table"), default="csv")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the report here instead of stdout")
    parser.add_argument("--parallel", action="store_true",
                        help="run the trials of each cell on a thread pool")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.trials < 1 or args.max_iter < 1 or not args.tol > 0 or args.distance < 0:
        print("error: trials and max-iter must be >= 1, tol > 0, distance >= 0",
              file=sys.stderr)
        return 2
    config = ExperimentConfig(
        n_values=args.n, p_values=args.p, prescribed_distance=args.distance,
        tol=args.tol, max_iter=args.max_iter, trials=args.trials,
        seed=args.seed, use_small_formulation=args.small,
        output_format=args.format, output_path=args.out,
        parallel_trials=args.parallel)
    rows = run_experiment(config)
    for row in rows:
        if row.error:
            print(f"error: n={row.n} p={row.p}: {row.error}", file=sys.stderr)
    try:
        emit(rows, config.output_format, config.output_path)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 1
    return 2 if any(row.error for row in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
