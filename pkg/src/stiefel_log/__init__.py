"""Riemannian logarithm and geodesic distance on the compact Stiefel manifold
under the canonical metric, by single shooting with a truncated Frechet
derivative of the matrix exponential."""
from .geometry import (AmbientTangent, NotTangent, StiefelFrame, StiefelPoint,
                       TangentFactors, ambient_from_factors, build_A,
                       canonical_inner, canonical_norm, embedded_norm,
                       factors_from_ambient, geodesic, geodesic_ode_residual,
                       make_frame, project_tangent)
from .linalg import (NotOrthonormal, SingularPencil, expm,
                     frechet_expm_exact, frechet_expm_truncated,
                     orthonormal_complement, skew_part, solve_sylvester,
                     sym_part, thin_qr)
from .problems import (GeneratorSpec, pair_with_distance, random_stiefel,
                       random_tangent_with_norm, trial_rng)
from .solver import (GeodesicProblem, MismatchPartition, Nonconvergence,
                     ReductionUnavailable, SolverOptions, SsafReport, distance,
                     initial_guess, lift_tangent, newton_step, reduce_to_small,
                     residual, solve_log)

__version__ = "0.1.0"
