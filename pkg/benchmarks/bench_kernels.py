"""Numba vs numpy timing of the quasi-triangular Sylvester back-substitution.

    python benchmarks/bench_kernels.py [--sizes 4,16,64,128] [--repeat 20]

Times the bare kernel on real Schur inputs, then full solve_log calls with
each engine selected through stiefel_log._accel.use_numba.
"""
import argparse
import time

import numpy as np
import scipy.linalg

from stiefel_log import _accel
from stiefel_log._kernels import trsyl_loops, trsyl_numpy
from stiefel_log.problems import GeneratorSpec, pair_with_distance, trial_rng
from stiefel_log.solver import SolverOptions, solve_log


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(sizes, repeat):
    rng = trial_rng(0)
    print(f"{'p':>5} {'numba (s)':>12} {'numpy (s)':>12} {'speedup':>8} {'max diff':>10}")
    for p in sizes:
        tp, _ = scipy.linalg.schur(rng.standard_normal((p, p)) + p * np.eye(p), output="real")
        ts, _ = scipy.linalg.schur(rng.standard_normal((p, p)), output="real")
        d = rng.standard_normal((p, p))
        trsyl_loops(tp, ts, d, 1e-14)  # compile outside the timing
        t_nb = best_of(lambda: trsyl_loops(tp, ts, d, 1e-14), repeat)
        t_np = best_of(lambda: trsyl_numpy(tp, ts, d, 1e-14), repeat)
        diff = np.abs(trsyl_loops(tp, ts, d, 1e-14)[0] - trsyl_numpy(tp, ts, d, 1e-14)[0]).max()
        print(f"{p:>5} {t_nb:>12.2e} {t_np:>12.2e} {t_np / t_nb:>8.1f} {diff:>10.1e}")


def solver_table(cells, trials):
    print(f"\n{'n':>5} {'p':>4} {'numba (s)':>12} {'numpy (s)':>12}")
    opts = SolverOptions(tol=1e-8)
    for n, p in cells:
        spec = GeneratorSpec(n, p, 0.5 * np.pi, seed=1)
        problems = [pair_with_distance(spec, i, opts) for i in range(trials)]
        times = []
        for flag in (True, False):
            previous = _accel.use_numba(flag)
            try:
                solve_log(problems[0])
                t0 = time.perf_counter()
                for pr in problems:
                    solve_log(pr)
                times.append((time.perf_counter() - t0) / trials)
            finally:
                _accel.use_numba(previous)
        print(f"{n:>5} {p:>4} {times[0]:>12.2e} {times[1]:>12.2e}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="4,16,64,128")
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()
    if not _accel.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    kernel_table([int(s) for s in args.sizes.split(",")], args.repeat)
    solver_table([(500, 2), (500, 16), (1000, 64)], args.trials)


if __name__ == "__main__":
    main()
