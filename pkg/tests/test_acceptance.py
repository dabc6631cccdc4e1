"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run under pytest (one PASS/FAIL line per criterion in the terminal summary)
or directly with ``python tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

from stiefel_log.bench import ExperimentConfig, run_experiment
from stiefel_log.geometry import (AmbientTangent, TangentFactors, build_A,
                                  canonical_norm, geodesic,
                                  geodesic_ode_residual, make_frame,
                                  project_tangent)
from stiefel_log.linalg import (expm, frechet_expm_exact,
                                frechet_expm_truncated, solve_sylvester)
from stiefel_log.oracle import (exact_step_reference, kronecker_sylvester,
                                sphere_distance)
from stiefel_log.problems import (GeneratorSpec, pair_with_distance,
                                  random_stiefel, random_tangent_with_norm,
                                  trial_rng)
from stiefel_log.solver import (GeodesicProblem, MismatchPartition,
                                SolverOptions, newton_step, solve_log,
                                with_options)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

HALF_PI = 0.5 * math.pi
RESULTS = {}


def record(number, title, ok, detail, elapsed, budget):
    ok = bool(ok) and elapsed < budget
    line = (f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail} "
            f"({elapsed:.2f}s, budget {budget:g}s)")
    RESULTS[number] = ok
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def sample_skew(rng, n, norm):
    G = rng.standard_normal((n, n))
    A = 0.5 * (G - G.T)
    return A * (norm / np.linalg.norm(A))


# ---- 1 -------------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    opts = SolverOptions(tol=1e-11, max_iter=1000)
    worst, failed, nonconv, total = 0.0, 0, 0, 0
    worst_theta = None
    for n in (2, 3, 10, 100):
        for i in range(50):
            rng = trial_rng(1000 + n, i)
            theta = rng.uniform(0.05 * math.pi, 0.9 * math.pi)
            fr = make_frame(random_stiefel(n, 1, rng))
            Y1, _ = geodesic(fr, random_tangent_with_norm(fr, theta, rng), 1.0)
            r = solve_log(GeodesicProblem(fr.base, Y1, opts))
            err = abs(r.distance - sphere_distance(fr.base.Y, Y1.Y))
            total += 1
            nonconv += not r.converged
            if err > 1e-8 or not r.converged:
                failed += 1
                if worst_theta is None or theta < worst_theta:
                    worst_theta = theta
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    detail = (f"{total - failed}/{total} pairs within 1e-8, {nonconv} not converged, "
              f"max error {worst:.2e}")
    if worst_theta is not None:
        detail += f", smallest failing angle {worst_theta / math.pi:.3f}pi"
    return record(1, "sphere oracle", failed == 0, detail, elapsed, 5.0)


# ---- 2 -------------------------------------------------------------------------

def criterion_2():
    start = time.perf_counter()
    ok, worst = True, 0.0
    for p in (2, 5, 10):
        spec = GeneratorSpec(100, p, HALF_PI, seed=2)
        for i in range(20):
            r = solve_log(pair_with_distance(spec, i, SolverOptions(tol=1e-8)))
            err = abs(r.distance - HALF_PI)
            worst = max(worst, err)
            ok &= r.converged and err <= 1e-6
    elapsed = time.perf_counter() - start
    return record(2, "planted-distance recovery", ok,
                  f"60 trials, max |d - 0.5pi| = {worst:.2e}", elapsed, 30.0)


# ---- 3 -------------------------------------------------------------------------

def criterion_3():
    start = time.perf_counter()
    rows = run_experiment(ExperimentConfig(
        n_values=[500], p_values=[2, 16], prescribed_distance=HALF_PI,
        tol=1e-3, trials=100, seed=0))
    elapsed = time.perf_counter() - start
    m2, m16 = rows[0].mean_iterations, rows[1].mean_iterations
    ok = 4.5 <= m2 <= 9 and 2.5 <= m16 <= 6 and m16 < m2
    return record(3, "iteration pattern St(500,p)", ok,
                  f"mean iterations p=2: {m2:.2f}, p=16: {m16:.2f}", elapsed, 180.0)


# ---- 4 -------------------------------------------------------------------------

def criterion_4():
    start = time.perf_counter()
    (row,) = run_experiment(ExperimentConfig(
        n_values=[1000], p_values=[10], prescribed_distance=HALF_PI,
        tol=1e-5, trials=10, seed=0))
    elapsed = time.perf_counter() - start
    m = row.mean_iterations
    return record(4, "iteration count St(1000,10)", 4.5 <= m <= 9,
                  f"mean iterations {m:.2f}", elapsed, 60.0)


# ---- 5 -------------------------------------------------------------------------

def criterion_5():
    start = time.perf_counter()
    rng = trial_rng(5)
    ratios = []
    for _ in range(20):
        A = sample_skew(rng, 5, 0.2)
        E = rng.standard_normal((5, 5))
        errs = [np.linalg.norm(frechet_expm_truncated(B, E) - frechet_expm_exact(B, E))
                for B in (A, 0.5 * A)]
        ratios.append(errs[0] / errs[1])
    elapsed = time.perf_counter() - start
    ok = all(3 <= r <= 5 for r in ratios)
    return record(5, "truncation order", ok,
                  f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]", elapsed, 1.0)


# ---- 6 -------------------------------------------------------------------------

def criterion_6():
    start = time.perf_counter()
    rng = trial_rng(6)
    worst = 0.0
    for p, count in ((5, 50), (15, 20)):
        for _ in range(count):
            P, S, C = rng.standard_normal((3, p, p))
            Y = kronecker_sylvester(P, S, C)
            X = solve_sylvester(P, S, C)
            worst = max(worst, np.linalg.norm(X - Y) / np.linalg.norm(Y))
    elapsed = time.perf_counter() - start
    return record(6, "Sylvester certification", worst <= 1e-11,
                  f"max relative error {worst:.2e}", elapsed, 5.0)


# ---- 7 -------------------------------------------------------------------------

def criterion_7():
    start = time.perf_counter()
    worst = dict(expm=0.0, manifold=0.0, speed=0.0, proj=0.0)
    ratios = []
    for n, p in ((8, 3), (12, 5)):
        for i in range(20):
            rng = trial_rng(7000 + n, i)
            fr = make_frame(random_stiefel(n, p, rng))
            f = random_tangent_with_norm(fr, rng.uniform(0.2, 2.0), rng)
            E = expm(build_A(f))
            worst["expm"] = max(worst["expm"], np.linalg.norm(E.T @ E - np.eye(n)) / n)
            speeds = []
            for t in (0.0, 0.25, 0.5, 1.0, 2.0):
                Z1, Z2 = geodesic(fr, f, t)
                worst["manifold"] = max(worst["manifold"],
                                        np.linalg.norm(Z1.Y.T @ Z1.Y - np.eye(p)))
                speeds.append(canonical_norm(Z1, AmbientTangent(Z1, Z2)))
            worst["speed"] = max(worst["speed"], max(speeds) - min(speeds))
            ratios.append(geodesic_ode_residual(fr, f, 0.5, 1e-2)
                          / geodesic_ode_residual(fr, f, 0.5, 5e-3))
            V, W = rng.standard_normal((2, n, p))
            PV, PW = project_tangent(fr.base, V).xi, project_tangent(fr.base, W).xi
            idem = np.linalg.norm(project_tangent(fr.base, PV).xi - PV)
            adj = abs(np.sum(PV * W) - np.sum(V * PW))
            worst["proj"] = max(worst["proj"], idem, adj)
    elapsed = time.perf_counter() - start
    ok = (worst["expm"] <= 1e-12 and worst["manifold"] <= 1e-11
          and worst["speed"] <= 1e-10 and worst["proj"] <= 1e-12
          and all(3.5 <= r <= 4.5 for r in ratios))
    detail = (f"expm {worst['expm']:.1e}/n, manifold {worst['manifold']:.1e}, "
              f"speed {worst['speed']:.1e}, projection {worst['proj']:.1e}, "
              f"ODE ratio [{min(ratios):.3f}, {max(ratios):.3f}]")
    return record(7, "geometry invariants", ok, detail, elapsed, 10.0)


# ---- 8 -------------------------------------------------------------------------

def criterion_8():
    start = time.perf_counter()
    ok, worst = True, 0.0
    for n, p in ((40, 3), (100, 7)):
        spec = GeneratorSpec(n, p, HALF_PI, seed=8)
        for i in range(10):
            pr = pair_with_distance(spec, i, SolverOptions(tol=1e-10))
            small = solve_log(pr)
            full = solve_log(with_options(pr, use_small_formulation=False))
            gap = abs(small.distance - full.distance)
            worst = max(worst, gap)
            ok &= (small.used_small_formulation and not full.used_small_formulation
                   and small.converged == full.converged and gap <= 1e-8)
    elapsed = time.perf_counter() - start
    return record(8, "reduced-formulation equivalence", ok,
                  f"20 pairs, max |d_full - d_reduced| = {worst:.2e}", elapsed, 20.0)


# ---- 9 -------------------------------------------------------------------------

def _step_gap(fr, f, part, relative=True):
    ex = exact_step_reference(fr, f, part)
    tr = newton_step(f, part)
    gap = np.sqrt(np.sum((ex[0] - tr[0]) ** 2) + np.sum((ex[1] - tr[1]) ** 2))
    if relative:
        gap /= np.sqrt(np.sum(ex[0] ** 2) + np.sum(ex[1] ** 2))
    return gap


def criterion_9():
    start = time.perf_counter()
    ratios, zero_gap = [], 0.0
    for n, p in ((6, 2), (8, 3)):
        for i in range(10):
            rng = trial_rng(9000 + n, i)
            fr = make_frame(random_stiefel(n, p, rng))
            u = random_tangent_with_norm(fr, 1.0, rng)
            part = MismatchPartition(rng.standard_normal((p, p)),
                                     rng.standard_normal((n - p, p)))
            gaps = [_step_gap(fr, TangentFactors(s * u.Omega, s * u.K), part)
                    for s in (0.1, 0.05)]
            ratios.append(gaps[0] / gaps[1])
            zero_gap = max(zero_gap, _step_gap(fr, TangentFactors.zeros(n, p), part,
                                               relative=False))
    elapsed = time.perf_counter() - start
    ok = all(1.4 <= r <= 2.8 for r in ratios) and zero_gap <= 1e-12
    return record(9, "exact-step consistency", ok,
                  f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}], "
                  f"gap at xi=0 {zero_gap:.1e}", elapsed, 10.0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.acceptance
@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    import sys
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
