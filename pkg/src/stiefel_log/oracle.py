"""Brute-force reference computations for tests.

Nothing here calls the code path it is used to check: the Kronecker solve
never touches the Schur-based Sylvester solver, the finite-difference
derivative only calls ``expm``, and the exact Newton step assembles the
un-truncated linear operator column by column.
"""
import numpy as np

from .geometry import TangentFactors, build_A
from .linalg import expm, frechet_expm_exact

__all__ = ["NotUnit", "sphere_distance", "kronecker_sylvester",
           "tangent_basis", "exact_step_reference",
           "finite_difference_frechet"]

KRONECKER_MAX = 30
EXACT_STEP_MAX_N = 12


class NotUnit(ValueError):
    pass


def sphere_distance(x, y):
    """Great-circle distance ``arccos(x . y)`` between unit vectors."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    for v in (x, y):
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise NotUnit(f"vector norm {np.linalg.norm(v)!r} is not 1")
    return float(np.arccos(np.clip(x @ y, -1.0, 1.0)))


def kronecker_sylvester(P, S, C):
    """Solve ``P X + X S = C`` through the dense vectorized system

        (I kron P + S^T kron I) vec(X) = vec(C)

    with column-major ``vec``. Cost is O((pq)^3); sizes above 30 are refused.
    """
    P = np.asarray(P, dtype=np.float64)
    S = np.asarray(S, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    p, q = P.shape[0], S.shape[0]
    if max(p, q) > KRONECKER_MAX:
        raise ValueError(f"Kronecker oracle limited to size {KRONECKER_MAX}")
    L = np.kron(np.eye(q), P) + np.kron(S.T, np.eye(p))
    x = np.linalg.solve(L, C.reshape(-1, order="F"))
    return x.reshape((p, q), order="F")


def tangent_basis(n, p):
    """Coordinate basis of tangent factors: ``e_i e_j^T - e_j e_i^T`` for the
    skew block, then unit entries of K."""
    basis = []
    for i in range(p):
        for j in range(i + 1, p):
            om = np.zeros((p, p))
            om[i, j], om[j, i] = 1.0, -1.0
            basis.append((om, np.zeros((n - p, p))))
    for i in range(n - p):
        for j in range(p):
            K = np.zeros((n - p, p))
            K[i, j] = 1.0
            basis.append((np.zeros((p, p)), K))
    return basis


def exact_step_reference(frame, f, part):
    """Newton update from the exact Frechet derivative of ``expm``.

    Solves ``D expm(A)[dA] I_{n,p} = [W; N]`` in the least-squares sense
    over all tangent directions ``(dOmega, dK)``, with the operator
    assembled column by column.
    """
    n, p = frame.n, frame.p
    if n > EXACT_STEP_MAX_N:
        raise ValueError(f"exact step reference limited to n <= {EXACT_STEP_MAX_N}")
    A = build_A(f)
    basis = tangent_basis(n, p)
    cols = [frechet_expm_exact(A, build_A(TangentFactors(om, K)))[:, :p].ravel()
            for om, K in basis]
    L = np.column_stack(cols)
    rhs = np.vstack([part.W, part.N]).ravel()
    coef, *_ = np.linalg.lstsq(L, rhs, rcond=None)
    dOm = np.zeros((p, p))
    dK = np.zeros((n - p, p))
    for c, (om, K) in zip(coef, basis):
        dOm += c * om
        dK += c * K
    return dOm, dK


def finite_difference_frechet(A, E, h):
    """Central difference ``(expm(A + hE) - expm(A - hE)) / 2h``."""
    if not 1e-7 <= h <= 1e-3:
        raise ValueError("h must lie in [1e-7, 1e-3]")
    A = np.asarray(A, dtype=np.float64)
    E = np.asarray(E, dtype=np.float64)
    return (expm(A + h * E) - expm(A - h * E)) / (2.0 * h)
