"""Seeded test problems: random Stiefel points and endpoint pairs at a
prescribed geodesic distance.

Every trial draws from its own Philox4x64-10 stream keyed by the 128-bit
pair ``(seed, trial_index)``, so trials can be generated in any order or in
parallel and still reproduce bit for bit.
"""
from dataclasses import dataclass

import numpy as np

from .geometry import StiefelPoint, TangentFactors, geodesic, make_frame
from .linalg import skew_part, thin_qr
from .solver import GeodesicProblem, SolverOptions

__all__ = ["GeneratorSpec", "trial_rng", "random_stiefel",
           "random_tangent_with_norm", "pair_with_distance"]

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    p: int
    prescribed_distance: float = 0.5 * np.pi
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if not 1 <= self.p <= self.n:
            raise ValueError(f"need 1 <= p <= n, got n={self.n}, p={self.p}")
        if not self.prescribed_distance >= 0:
            raise ValueError("prescribed_distance must be nonnegative")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def trial_rng(seed, trial_index=0):
    key = np.array([int(seed) & _U64, int(trial_index) & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_stiefel(n, p, rng):
    """Q factor of an n x p standard Gaussian matrix."""
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")
    while True:
        q, _, deficient = thin_qr(rng.standard_normal((n, p)))
        if not deficient:
            return StiefelPoint(q)


def random_tangent_with_norm(frame, d, rng):
    """Gaussian tangent factors rescaled to canonical norm ``d``."""
    if not d >= 0:
        raise ValueError("d must be nonnegative")
    n, p = frame.n, frame.p
    omega = skew_part(rng.standard_normal((p, p)))
    K = rng.standard_normal((n - p, p))
    norm = np.sqrt(0.5 * np.sum(omega ** 2) + np.sum(K ** 2))
    if d == 0 or norm == 0:
        return TangentFactors.zeros(n, p)
    s = d / norm
    return TangentFactors(s * omega, s * K)


def pair_with_distance(spec, trial_index, options=None):
    """Endpoint pair ``(Y0, Exp_{Y0}(xi))`` with ``||xi||_c`` fixed by ``spec``.

    The planted factors are kept on the returned problem.
    """
    rng = trial_rng(spec.seed, trial_index)
    Y0 = random_stiefel(spec.n, spec.p, rng)
    frame = make_frame(Y0)
    f = random_tangent_with_norm(frame, spec.prescribed_distance, rng)
    Y1, _ = geodesic(frame, f, 1.0)
    return GeodesicProblem(Y0, Y1, options or SolverOptions(), planted=f)
