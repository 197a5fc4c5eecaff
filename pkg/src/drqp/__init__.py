"""Douglas-Rachford splitting for convex QPs with strong-infeasibility certificates."""

from .displacement import (
    CertificatePair,
    IdentityReport,
    orthogonality_check,
    split_displacement,
    verify_identities,
)
from .engine import (
    SolveResult,
    SolverConfig,
    SolverState,
    Status,
    cesaro_estimate,
    classify,
    delta_estimates,
    dr_step,
    initial_state,
    run,
)
from .linalg import ProductVector, inner, pseudo_inverse_apply, spd_solve
from .oracle import (
    OracleConfig,
    OracleError,
    brute_force_conjugate,
    brute_force_prox,
    canonical_instances,
    oracle_vd,
    oracle_vp,
)
from .qp import QpProblem, QpSplitting
from .sets import (
    Box,
    ConvexSet,
    NonnegOrthant,
    PolarSecondOrderCone,
    Product,
    SecondOrderCone,
    WholeSpace,
    Zero,
)

__all__ = [
    "Box",
    "CertificatePair",
    "ConvexSet",
    "IdentityReport",
    "NonnegOrthant",
    "OracleConfig",
    "OracleError",
    "PolarSecondOrderCone",
    "Product",
    "ProductVector",
    "QpProblem",
    "QpSplitting",
    "SecondOrderCone",
    "SolveResult",
    "SolverConfig",
    "SolverState",
    "Status",
    "WholeSpace",
    "Zero",
    "brute_force_conjugate",
    "brute_force_prox",
    "canonical_instances",
    "cesaro_estimate",
    "classify",
    "delta_estimates",
    "dr_step",
    "initial_state",
    "inner",
    "oracle_vd",
    "oracle_vp",
    "orthogonality_check",
    "pseudo_inverse_apply",
    "run",
    "spd_solve",
    "split_displacement",
    "verify_identities",
]

__version__ = "0.1.0"
