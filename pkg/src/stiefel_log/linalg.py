"""Dense real matrix kernels.

Matrices are plain ``numpy.ndarray`` of dtype float64 (C order). The matrix
exponential and the real Schur factorization are delegated to LAPACK through
scipy; the Sylvester back-substitution is ours (see ``_kernels``).
"""
from typing import NamedTuple

import numpy as np
import scipy.linalg

from ._kernels import trsyl

__all__ = [
    "NotOrthonormal", "SingularPencil", "ThinQR",
    "thin_qr", "orthonormal_complement", "expm",
    "frechet_expm_truncated", "frechet_expm_exact", "solve_sylvester",
    "skew_part", "sym_part",
]


class NotOrthonormal(ValueError):
    """Input columns are not orthonormal."""


class SingularPencil(ArithmeticError):
    """The Sylvester operator ``X -> P X + X S`` is numerically singular."""


class ThinQR(NamedTuple):
    q: np.ndarray
    r: np.ndarray
    rank_deficient: bool


def _as_matrix(M, name="M"):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {M.shape}")
    return M


def _require_square(M, name="M"):
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")


def thin_qr(M):
    """Householder QR ``M = Q R`` with ``Q`` n x p and a nonnegative R diagonal.

    The ``rank_deficient`` flag is raised (not an exception) when a diagonal
    entry of R drops below ``1e-12 * ||M||_F``.
    """
    M = _as_matrix(M)
    n, p = M.shape
    if n < p:
        raise ValueError(f"thin_qr needs n >= p, got {M.shape}")
    q, r = np.linalg.qr(M, mode="reduced")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    r = r * signs[:, None]
    scale = np.linalg.norm(M)
    deficient = bool(np.any(np.abs(np.diag(r)) < 1e-12 * scale)) or scale == 0.0
    return ThinQR(q, r, deficient)


def check_orthonormal(Y, tol=1e-10):
    Y = _as_matrix(Y, "Y")
    p = Y.shape[1]
    if Y.shape[0] < p:
        raise NotOrthonormal(f"more columns than rows: {Y.shape}")
    err = np.linalg.norm(Y.T @ Y - np.eye(p))
    if not err <= tol:
        raise NotOrthonormal(f"||Y^T Y - I||_F = {err:.3e} exceeds {tol:g}")
    return Y


def orthonormal_complement(Y):
    """Orthonormal basis of ``span(Y)^perp`` as an n x (n - p) matrix.

    Taken from the trailing columns of the complete Householder Q factor of
    ``Y``; for ``p == n`` an n x 0 matrix is returned.
    """
    Y = check_orthonormal(Y)
    n, p = Y.shape
    if p == n:
        return np.zeros((n, 0))
    q, _ = np.linalg.qr(Y, mode="complete")
    return np.ascontiguousarray(q[:, p:])


def expm(A):
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    A = _as_matrix(A, "A")
    _require_square(A, "A")
    if not np.all(np.isfinite(A)):
        raise ValueError("expm input has non-finite entries")
    return scipy.linalg.expm(A)


def frechet_expm_truncated(A, E):
    """First two terms of the Frechet derivative series: ``E + (AE + EA)/2``."""
    A = _as_matrix(A, "A")
    E = _as_matrix(E, "E")
    _require_square(A, "A")
    if A.shape != E.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {E.shape}")
    return E + 0.5 * (A @ E + E @ A)


def frechet_expm_exact(A, E):
    """``D expm(A)[E]`` from the top-right block of ``expm([[A, E], [0, A]])``."""
    A = _as_matrix(A, "A")
    E = _as_matrix(E, "E")
    _require_square(A, "A")
    if A.shape != E.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {E.shape}")
    n = A.shape[0]
    big = np.zeros((2 * n, 2 * n))
    big[:n, :n] = A
    big[:n, n:] = E
    big[n:, n:] = A
    return expm(big)[:n, n:]


def _real_schur(M):
    try:
        t, z = scipy.linalg.schur(M, output="real")
    except np.linalg.LinAlgError as exc:
        raise SingularPencil(f"real Schur iteration failed: {exc}") from exc
    return t, z


def solve_sylvester(P, S, C):
    """Solve ``P X + X S = C`` by Bartels-Stewart.

    Both coefficients are reduced to real Schur form, the transformed system
    is back-substituted block by block, and the solution is rotated back.
    Raises :class:`SingularPencil` when the spectra of ``P`` and ``-S``
    overlap to within ``1e-12`` relative to ``||P||_F + ||S||_F``.
    """
    P = _as_matrix(P, "P")
    S = _as_matrix(S, "S")
    C = _as_matrix(C, "C")
    _require_square(P, "P")
    _require_square(S, "S")
    if C.shape != (P.shape[0], S.shape[0]):
        raise ValueError(
            f"C must be {P.shape[0]}x{S.shape[0]}, got {C.shape}")
    if C.size == 0:
        return np.zeros(C.shape)

    tp, u = _real_schur(P)
    ts, v = _real_schur(S)
    d = u.T @ C @ v
    tol = 1e-12 * max(np.linalg.norm(P) + np.linalg.norm(S), np.finfo(float).tiny)
    y, status = trsyl(tp, ts, d, tol)
    if status != 0:
        raise SingularPencil(
            "Sylvester operator is singular: spectra of P and -S overlap")
    return u @ y @ v.T


def skew_part(M):
    M = _as_matrix(M)
    _require_square(M)
    return 0.5 * (M - M.T)


def sym_part(M):
    M = _as_matrix(M)
    _require_square(M)
    return 0.5 * (M + M.T)
