"""Riemannian logarithm on St(n, p) by single shooting.

Newton's method is applied to the endpoint mismatch ``F(xi) = Exp_{Y0}(xi) - Y1``.
The derivative of the matrix exponential is replaced by its two-term
truncation ``E + (AE + EA)/2``; in the frame ``Q = [Y0 Y0perp]`` the
linearized system splits into a p x p Sylvester equation for ``dOmega``
and an explicit update for ``dK``.

All iterations run in Q-coordinates, where the base point is ``I_{m,p}``
and ``Q^T Y1`` is computed once per solve. For ``p < n/2`` the problem is
first reduced to an equivalent one on St(2p, p).
"""
import time
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from .geometry import (AmbientTangent, StiefelPoint,
                       TangentFactors, ambient_from_factors, build_A,
                       make_frame, project_tangent)
from .linalg import (SingularPencil, expm, skew_part, solve_sylvester,
                     sym_part, thin_qr)

__all__ = [
    "NORM_CHOICES", "SolverOptions", "GeodesicProblem", "MismatchPartition",
    "SsafReport", "LiftContext", "Nonconvergence", "ReductionUnavailable",
    "initial_guess", "residual", "newton_step", "solve_log",
    "reduce_to_small", "lift_tangent", "distance",
]

NORM_CHOICES = ("frobenius", "canonical")


class Nonconvergence(RuntimeError):
    """Raised by :func:`distance` when the shooting iteration did not converge."""

    def __init__(self, report):
        super().__init__(
            f"no convergence after {report.iterations} iterations "
            f"({report.failure})")
        self.report = report


class ReductionUnavailable(ValueError):
    """The St(2p, p) reduction needs ``p < n/2``."""


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 100
    use_small_formulation: bool = True
    norm_choice: str = "frobenius"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.norm_choice not in NORM_CHOICES:
            raise ValueError(f"norm_choice must be one of {NORM_CHOICES}")


@dataclass(frozen=True, eq=False)
class GeodesicProblem:
    Y0: StiefelPoint
    Y1: StiefelPoint
    options: SolverOptions = field(default_factory=SolverOptions)
    # tangent factors at Y0 used to plant Y1, when known
    planted: Optional[TangentFactors] = None

    def __post_init__(self):
        for name in ("Y0", "Y1"):
            value = getattr(self, name)
            if not isinstance(value, StiefelPoint):
                object.__setattr__(self, name, StiefelPoint(value))
        if self.Y0.Y.shape != self.Y1.Y.shape:
            raise ValueError(
                f"endpoints differ in shape: {self.Y0.Y.shape} vs {self.Y1.Y.shape}")


class MismatchPartition(NamedTuple):
    W: np.ndarray  # leading p rows of Q^T (Y1 - Z1)
    N: np.ndarray  # trailing n - p rows


@dataclass(eq=False)
class SsafReport:
    xi_star: AmbientTangent
    distance: float
    iterations: int
    update_norm_history: list
    residual_norm_history: list
    converged: bool
    wall_time: float
    used_small_formulation: bool
    failure: Optional[str] = None  # "max_iter", "singular_pencil" or "diverged"


class LiftContext(NamedTuple):
    Y0: StiefelPoint
    Qr: np.ndarray  # n x p, orthonormal, orthogonal to Y0


def _stop_norm(dOmega, dK, norm_choice):
    if norm_choice == "canonical":
        return float(np.sqrt(0.5 * np.sum(dOmega ** 2) + np.sum(dK ** 2)))
    return float(np.sqrt(np.sum(dOmega ** 2) + np.sum(dK ** 2)))


def _ambient_norm(X, Y0tX, norm_choice):
    sq = np.sum(X ** 2)
    if norm_choice == "canonical":
        sq -= 0.5 * np.sum(Y0tX ** 2)
    return float(np.sqrt(max(sq, 0.0)))


def initial_guess(Y0, Y1, norm_choice="frobenius"):
    """Project ``Y1 - Y0`` onto the tangent space at ``Y0`` and rescale it
    back to the length of ``Y1 - Y0``."""
    Y0 = Y0 if isinstance(Y0, StiefelPoint) else StiefelPoint(Y0)
    Y1 = Y1 if isinstance(Y1, StiefelPoint) else StiefelPoint(Y1)
    a, b = Y0.Y, Y1.Y
    M = a.T @ b
    xbar = b - a
    pxbar = b - a @ sym_part(M)
    num = _ambient_norm(xbar, M - np.eye(M.shape[0]), norm_choice)
    den = _ambient_norm(pxbar, skew_part(M), norm_choice)
    if num == 0.0 or den < 1e-14 * num:
        return AmbientTangent(Y0, np.zeros_like(a))
    return project_tangent(Y0, (num / den) * pxbar)


def _initial_factors(B, p, norm_choice):
    # same construction as initial_guess, in Q-coordinates: Q^T Y0 = I_{m,p}
    M, Kb = B[:p], B[p:]
    Om = skew_part(M)
    M_minus_I = M - np.eye(p)
    if norm_choice == "canonical":
        num = np.sqrt(0.5 * np.sum(M_minus_I ** 2) + np.sum(Kb ** 2))
        den = np.sqrt(0.5 * np.sum(Om ** 2) + np.sum(Kb ** 2))
    else:
        num = np.sqrt(np.sum(M_minus_I ** 2) + np.sum(Kb ** 2))
        den = np.sqrt(np.sum(Om ** 2) + np.sum(Kb ** 2))
    if num == 0.0 or den < 1e-14 * num:
        return np.zeros((p, p)), np.zeros_like(Kb)
    s = num / den
    return s * Om, s * Kb


def _partition(Om, K, B):
    p = Om.shape[0]
    E = expm(build_A(TangentFactors(Om, K)))[:, :p]  # Q^T Z1
    R = B - E
    return MismatchPartition(R[:p], R[p:]), E


def residual(frame, f, Y1, QtY1=None):
    """Mismatch ``F = Z1(1) - Y1`` with ``Z1`` the geodesic endpoint for ``f``.

    Returns ``(F, Z1, MismatchPartition)``. Pass ``QtY1`` to reuse a cached
    ``frame.Q.T @ Y1``.
    """
    Y1 = Y1.Y if isinstance(Y1, StiefelPoint) else np.asarray(Y1, dtype=np.float64)
    if QtY1 is None:
        QtY1 = frame.Q.T @ Y1
    part, E = _partition(f.Omega, f.K, QtY1)
    Z1 = frame.Q @ E
    return Z1 - Y1, StiefelPoint(Z1), part


def _sylvester_coefficients(Om, K, W, N):
    p = Om.shape[0]
    KtK = K.T @ K
    KtN = K.T @ N
    P = np.eye(p) + 0.5 * Om + 0.25 * KtK
    S = 0.5 * Om - 0.25 * KtK
    C = W + 0.5 * KtN + 0.5 * KtN.T
    return P, S, C


def newton_step(f, part):
    """Truncated-derivative Newton update ``(dOmega, dK)``.

    ``dOmega`` solves
    ``(I + Om/2 + K^T K/4) dOm + dOm (Om/2 - K^T K/4) = W + (K^T N + N^T K)/2``
    and is re-skewed; then ``dK = N - K dOm / 2`` (the factor
    ``I + Om/2`` multiplying ``dK`` is replaced by the identity).
    """
    Om, K = f.Omega, f.K
    W, N = part
    P, S, C = _sylvester_coefficients(Om, K, W, N)
    dOm = skew_part(solve_sylvester(P, S, C))
    dK = N - 0.5 * (K @ dOm)
    return dOm, dK


def _shoot(B, p, options):
    """Run the iteration for base ``I_{m,p}`` and target ``B = Q^T Y1``."""
    Om, K = _initial_factors(B, p, options.norm_choice)
    updates, residuals = [], []
    failure = "max_iter"
    converged = False
    for _ in range(options.max_iter):
        part, _E = _partition(Om, K, B)
        try:
            dOm, dK = newton_step(TangentFactors(Om, K), part)
        except SingularPencil:
            failure = "singular_pencil"
            break
        # the tangent-space projection only touches the skew block in factor form
        Om = skew_part(Om + dOm)
        K = K + dK
        u = _stop_norm(dOm, dK, options.norm_choice)
        residuals.append(float(np.hypot(np.linalg.norm(part.W), np.linalg.norm(part.N))))
        updates.append(u)
        if not (np.isfinite(u) and np.all(np.isfinite(K))):
            failure = "diverged"
            break
        if u <= options.tol:
            converged = True
            failure = None
            break
    return TangentFactors(Om, K), updates, residuals, converged, failure


def reduce_to_small(Y0, Y1, options=None):
    """Equivalent endpoint problem on St(2p, p) and the context to lift back.

    With ``M = Y0^T Y1`` and ``Y1 - Y0 M = Qr R`` (thin QR), the reduced endpoints are
    ``[I; 0]`` and ``[M; R]``; tangents lift through the basis ``[Y0 Qr]``.
    """
    Y0 = Y0 if isinstance(Y0, StiefelPoint) else StiefelPoint(Y0)
    Y1 = Y1 if isinstance(Y1, StiefelPoint) else StiefelPoint(Y1)
    n, p = Y0.Y.shape
    if not 2 * p < n:
        raise ReductionUnavailable(f"St({n},{p}) has no smaller formulation")
    M = Y0.Y.T @ Y1.Y
    perp = Y1.Y - Y0.Y @ M
    # QR of [Y0 perp] rather than of perp alone: keeps Qr orthogonal to Y0
    # when perp is rank deficient or pure round-off (Y1 close to Y0)
    qr = thin_qr(np.hstack([Y0.Y, perp]))
    Qr, R = qr.q[:, p:], qr.r[p:, p:]
    X0 = np.eye(2 * p, p)
    X1 = np.vstack([M, R])
    reduced = GeodesicProblem(StiefelPoint(X0), StiefelPoint(X1),
                              options or SolverOptions())
    return reduced, LiftContext(Y0, Qr)


def lift_tangent(context, reduced_tangent):
    p = context.Y0.p
    x = reduced_tangent.xi if isinstance(reduced_tangent, AmbientTangent) else reduced_tangent
    xi = context.Y0.Y @ x[:p] + context.Qr @ x[p:]
    return AmbientTangent(context.Y0, xi)


def solve_log(problem):
    """Tangent vector ``xi*`` at ``Y0`` with ``Exp_{Y0}(xi*) = Y1``.

    Nonconvergence is reported through ``converged=False`` and ``failure``,
    never raised.
    """
    opts = problem.options
    Y0, Y1 = problem.Y0, problem.Y1
    n, p = Y0.Y.shape
    start = time.perf_counter()

    if np.linalg.norm(Y1.Y - Y0.Y) <= 1e-14 * np.sqrt(p):
        return SsafReport(AmbientTangent(Y0, np.zeros((n, p))), 0.0, 0, [], [],
                          True, time.perf_counter() - start, False)

    small = opts.use_small_formulation and 2 * p < n
    if small:
        reduced, ctx = reduce_to_small(Y0, Y1, opts)
        B = reduced.Y1.Y
    else:
        frame = make_frame(Y0)
        B = frame.Q.T @ Y1.Y
    f, updates, residuals, converged, failure = _shoot(B, p, opts)
    if small:
        xi = lift_tangent(ctx, f.stacked())
    else:
        xi = ambient_from_factors(frame, f)
    return SsafReport(
        xi_star=xi,
        distance=f.canonical_norm(),
        iterations=len(updates),
        update_norm_history=updates,
        residual_norm_history=residuals,
        converged=converged,
        wall_time=time.perf_counter() - start,
        used_small_formulation=small,
        failure=failure,
    )


def distance(Y0, Y1, options=None):
    """Canonical geodesic distance; raises :class:`Nonconvergence` on failure."""
    problem = GeodesicProblem(Y0, Y1, options or SolverOptions())
    report = solve_log(problem)
    if not report.converged:
        raise Nonconvergence(report)
    return report.distance


def with_options(problem, **changes):
    """Copy of ``problem`` with some solver options replaced."""
    return replace(problem, options=replace(problem.options, **changes))
