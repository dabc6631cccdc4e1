"""Seeded sweeps over St(n, p) with planted endpoint pairs."""
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .problems import GeneratorSpec, pair_with_distance
from .solver import SolverOptions, solve_log

__all__ = ["CSV_HEADER", "ExperimentConfig", "ExperimentRow",
           "run_experiment", "emit", "parse_csv", "format_table"]

CSV_HEADER = ("n", "p", "distance", "tol", "trials", "mean_iterations",
              "mean_time_s", "convergence_rate", "mean_abs_distance_error")


@dataclass
class ExperimentConfig:
    n_values: list
    p_values: list
    prescribed_distance: float = 0.5 * math.pi
    tol: float = 1e-5
    max_iter: int = 100
    trials: int = 10
    seed: int = 0
    use_small_formulation: bool = True
    output_format: str = "csv"
    output_path: Optional[str] = None
    parallel_trials: bool = False

    def __post_init__(self):
        if not self.n_values or not self.p_values:
            raise ValueError("n_values and p_values must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.output_format not in ("csv", "table"):
            raise ValueError("output_format must be 'csv' or 'table'")


@dataclass
class ExperimentRow:
    n: int
    p: int
    prescribed_distance: float
    tol: float
    trials: int
    mean_iterations: float
    mean_time_s: float
    convergence_rate: float
    mean_abs_distance_error: float
    # set when the (n, p) combination could not be run; not serialized
    error: Optional[str] = field(default=None, compare=False)
    iterations: list = field(default_factory=list, compare=False, repr=False)
    converged: list = field(default_factory=list, compare=False, repr=False)


def _run_trial(spec, index, options):
    problem = pair_with_distance(spec, index, options)
    report = solve_log(problem)
    return report.iterations, report.converged, report.wall_time, report.distance


def _run_cell(config, n, p, options):
    spec = GeneratorSpec(n, p, config.prescribed_distance, config.seed,
                         config.trials)
    indices = range(config.trials)
    if config.parallel_trials:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda i: _run_trial(spec, i, options), indices))
    else:
        results = [_run_trial(spec, i, options) for i in indices]

    iters = [r[0] for r in results]
    conv = [r[1] for r in results]
    ok = [r for r in results if r[1]]
    nan = float("nan")
    return ExperimentRow(
        n=n, p=p,
        prescribed_distance=config.prescribed_distance,
        tol=config.tol,
        trials=config.trials,
        mean_iterations=float(np.mean([r[0] for r in ok])) if ok else nan,
        mean_time_s=float(np.mean([r[2] for r in results])),
        convergence_rate=len(ok) / config.trials,
        mean_abs_distance_error=(
            float(np.mean([abs(r[3] - config.prescribed_distance) for r in ok]))
            if ok else nan),
        iterations=iters,
        converged=conv,
    )


def run_experiment(config):
    """One row per (n, p) pair, in sweep order.

    Invalid combinations (for example ``p > n``) produce a row with ``error``
    set and NaN statistics instead of aborting the sweep.
    """
    options = SolverOptions(tol=config.tol, max_iter=config.max_iter,
                            use_small_formulation=config.use_small_formulation)
    rows = []
    for n in config.n_values:
        for p in config.p_values:
            try:
                rows.append(_run_cell(config, int(n), int(p), options))
            except ValueError as exc:
                nan = float("nan")
                rows.append(ExperimentRow(
                    int(n), int(p), config.prescribed_distance, config.tol,
                    config.trials, nan, nan, 0.0, nan, error=str(exc)))
    return rows


def _num(x):
    # repr of a builtin float is locale-independent and round-trips exactly
    return repr(float(x))


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([int(r.n), int(r.p), _num(r.prescribed_distance),
                         _num(r.tol), int(r.trials), _num(r.mean_iterations),
                         _num(r.mean_time_s), _num(r.convergence_rate),
                         _num(r.mean_abs_distance_error)])
    return buf.getvalue()


def parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        rows.append(ExperimentRow(
            n=int(rec[0]), p=int(rec[1]), prescribed_distance=float(rec[2]),
            tol=float(rec[3]), trials=int(rec[4]),
            mean_iterations=float(rec[5]), mean_time_s=float(rec[6]),
            convergence_rate=float(rec[7]),
            mean_abs_distance_error=float(rec[8])))
    return rows


def format_table(rows):
    head = ("n", "p", "d(X,Y)", "tol", "runs", "Avg. comput. time (s)",
            "Avg. no. of iterations", "conv. rate", "Avg. |d - d*|")
    body = [(str(r.n), str(r.p), f"{r.prescribed_distance / math.pi:.3g}pi",
             f"{r.tol:.0e}", str(r.trials), f"{r.mean_time_s:.5f}",
             f"{r.mean_iterations:.2f}", f"{r.convergence_rate:.2f}",
             f"{r.mean_abs_distance_error:.2e}") for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def emit(rows, fmt="csv", path=None):
    """Serialize rows as CSV or an aligned table.

    Writes to ``path`` when given, otherwise to standard output, and returns
    the text. An unwritable path raises ``OSError``.
    """
    if not rows:
        raise ValueError("nothing to emit")
    if fmt == "csv":
        text = _csv_text(rows)
    elif fmt == "table":
        text = format_table(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text

