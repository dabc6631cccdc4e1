"""Points, frames and tangent vectors on the compact Stiefel manifold St(n, p).

A tangent vector at ``Y0`` is stored either in ambient form (an n x p
matrix ``xi``) or factored as ``xi = Y0 @ Omega + Y0perp @ K`` with ``Omega``
skew-symmetric p x p and ``K`` arbitrary (n - p) x p. Norms and geodesics
use the canonical metric ``g(xi, zeta) = tr(xi^T (I - Y Y^T / 2) zeta)``.
"""
from dataclasses import dataclass, field

import numpy as np

from .linalg import (check_orthonormal, expm, orthonormal_complement,
                     skew_part, sym_part)

__all__ = [
    "NotTangent", "StiefelPoint", "StiefelFrame", "TangentFactors",
    "AmbientTangent", "make_frame", "project_tangent",
    "factors_from_ambient", "ambient_from_factors", "canonical_inner",
    "canonical_norm", "embedded_norm", "build_A", "geodesic",
    "geodesic_ode_residual",
]

TANGENT_TOL = 1e-10


class NotTangent(ValueError):
    """Matrix is not in the tangent space at the given point."""


@dataclass(frozen=True, eq=False)
class StiefelPoint:
    Y: np.ndarray

    def __post_init__(self):
        Y = np.array(self.Y, dtype=np.float64)
        if Y.ndim != 2 or Y.shape[1] < 1:
            raise ValueError(f"Stiefel point must be n x p with p >= 1, got {Y.shape}")
        object.__setattr__(self, "Y", check_orthonormal(Y))

    @property
    def n(self):
        return self.Y.shape[0]

    @property
    def p(self):
        return self.Y.shape[1]


@dataclass(frozen=True, eq=False)
class StiefelFrame:
    base: StiefelPoint
    complement: np.ndarray
    Q: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.base.n

    @property
    def p(self):
        return self.base.p


@dataclass(frozen=True, eq=False)
class TangentFactors:
    """``(Omega, K)``; ``Omega`` is re-skewed on construction."""
    Omega: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        omega = skew_part(self.Omega)
        K = np.array(self.K, dtype=np.float64)
        if K.ndim != 2 or K.shape[1] != omega.shape[0]:
            raise ValueError(
                f"K must have {omega.shape[0]} columns, got shape {K.shape}")
        object.__setattr__(self, "Omega", omega)
        object.__setattr__(self, "K", K)

    @classmethod
    def zeros(cls, n, p):
        return cls(np.zeros((p, p)), np.zeros((n - p, p)))

    def canonical_norm(self):
        return float(np.sqrt(0.5 * np.sum(self.Omega ** 2) + np.sum(self.K ** 2)))

    def stacked(self):
        return np.vstack([self.Omega, self.K])


@dataclass(frozen=True, eq=False)
class AmbientTangent:
    at: StiefelPoint
    xi: np.ndarray

    def __post_init__(self):
        xi = np.array(self.xi, dtype=np.float64)
        if xi.shape != self.at.Y.shape:
            raise ValueError(f"tangent shape {xi.shape} != point shape {self.at.Y.shape}")
        asym = np.linalg.norm(sym_part(self.at.Y.T @ xi))
        if asym > TANGENT_TOL * max(1.0, np.linalg.norm(xi)):
            raise NotTangent(f"||sym(Y^T xi)||_F = {asym:.3e}")
        object.__setattr__(self, "xi", xi)


def _point(Y):
    return Y if isinstance(Y, StiefelPoint) else StiefelPoint(Y)


def make_frame(Y0):
    Y0 = _point(Y0)
    comp = orthonormal_complement(Y0.Y)
    return StiefelFrame(Y0, comp, np.hstack([Y0.Y, comp]))


def project_tangent(Y, V):
    """Orthogonal projection of ``V`` onto the tangent space at ``Y``."""
    Y = _point(Y)
    V = np.asarray(V, dtype=np.float64)
    if V.shape != Y.Y.shape:
        raise ValueError(f"shape mismatch: {V.shape} vs {Y.Y.shape}")
    YtV = Y.Y.T @ V
    xi = Y.Y @ skew_part(YtV) + (V - Y.Y @ YtV)
    return AmbientTangent(Y, xi)


def factors_from_ambient(frame, xi):
    Y0 = frame.base.Y
    x = xi.xi if isinstance(xi, AmbientTangent) else np.asarray(xi, dtype=np.float64)
    if x.shape != Y0.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {Y0.shape}")
    Y0tx = Y0.T @ x
    if np.linalg.norm(sym_part(Y0tx)) > 1e-8 * np.linalg.norm(x):
        raise NotTangent("vector has a normal component at the frame base")
    return TangentFactors(Y0tx, frame.complement.T @ x)


def ambient_from_factors(frame, f):
    xi = frame.base.Y @ f.Omega + frame.complement @ f.K
    return AmbientTangent(frame.base, xi)


def _same_base(Y, xi):
    if xi.at is not Y and not np.array_equal(xi.at.Y, Y.Y):
        raise ValueError("tangent vector is attached to a different base point")


def canonical_inner(Y, xi, zeta):
    Y = _point(Y)
    _same_base(Y, xi)
    _same_base(Y, zeta)
    a, b = xi.xi, zeta.xi
    # tr(a^T (I - Y Y^T / 2) b) without forming the n x n matrix
    return float(np.sum(a * b) - 0.5 * np.sum((Y.Y.T @ a) * (Y.Y.T @ b)))


def canonical_norm(Y, xi):
    return float(np.sqrt(max(canonical_inner(Y, xi, xi), 0.0)))


def embedded_norm(xi):
    x = xi.xi if isinstance(xi, AmbientTangent) else xi
    return float(np.linalg.norm(x))


def build_A(f):
    """The skew-symmetric generator ``[[Omega, -K^T], [K, 0]]``."""
    p = f.Omega.shape[0]
    m = p + f.K.shape[0]
    A = np.zeros((m, m))
    A[:p, :p] = f.Omega
    A[p:, :p] = f.K
    A[:p, p:] = -f.K.T
    return A


def geodesic(frame, f, t):
    """Geodesic ``Z1(t)`` from ``frame.base`` with velocity ``f``, and ``Z2 = Z1'``.

    One exponential is shared by position and velocity; only the leading p
    columns of ``expm(A t)`` are used for ``Z1``.
    """
    p = frame.p
    E = expm(build_A(f) * t)
    Z1 = frame.Q @ E[:, :p]
    Z2 = frame.Q @ (E @ f.stacked())
    return StiefelPoint(Z1), Z2


def geodesic_ode_residual(frame, f, t, h):
    """Frobenius norm of the geodesic ODE left side at ``t``.

    ``Y''`` is replaced by a central second difference with step ``h``; the
    velocity is the exact ``Z2(t)``.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    Ym = geodesic(frame, f, t - h)[0].Y
    Z1, Z2 = geodesic(frame, f, t)
    Yp = geodesic(frame, f, t + h)[0].Y
    Y = Z1.Y
    acc = (Yp - 2.0 * Y + Ym) / h ** 2
    YtV = Y.T @ Z2
    lhs = acc + Z2 @ (Z2.T @ Y) + Y @ (YtV @ YtV + Z2.T @ Z2)
    return float(np.linalg.norm(lhs))
