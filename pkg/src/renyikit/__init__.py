"""Numerical toolkit for Renyi divergence of every order.

Discrete divergences are computed in log domain with explicit zero
conventions; Gaussians get closed forms; on top sit power-mean mixture
projections, Chernoff information, channel capacity / minimax
redundancy with the normalized-maximum-likelihood optimum at order
infinity, and finite-partition estimates for densities on an interval.
"""

from .capacity import (
    Channel,
    RedundancyResult,
    ShtarkovResult,
    blahut_arimoto,
    capacity_lower,
    conjecture_probe,
    minimax_redundancy,
    ml_capacity_input,
    shtarkov,
)
from .chernoff import ChernoffResult, chernoff, pinsker_check, tilted, tradeoff_value
from .discretize import (
    DensitySpec,
    LevelPartition,
    RefinementResult,
    level_partition,
    partition_divergence,
    refine_to_convergence,
)
from .distributions import DiscreteDist, Order, as_order
from .divergence import (
    chi_squared,
    divergence_curve,
    hellinger_sq,
    kl_divergence,
    pushforward,
    renyi_divergence,
    renyi_entropy,
    total_variation,
)
from .errors import ConvergenceError, DomainError, ValidationError
from .gaussian import (
    DichotomyResult,
    GaussianParams,
    GeometricBound,
    PowerLawBound,
    SequenceSpec,
    fisher_information,
    fisher_taylor_ratio,
    gaussian_dichotomy,
    gaussian_kl,
    gaussian_renyi,
    kakutani_classify,
    product_divergence,
)
from .mixtures import (
    AlphaMixture,
    ProjectionResult,
    alpha_mixture,
    alpha_project,
    mixture_compose,
    pythagorean_gap,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaMixture",
    "Channel",
    "ChernoffResult",
    "ConvergenceError",
    "DensitySpec",
    "DichotomyResult",
    "DiscreteDist",
    "DomainError",
    "GaussianParams",
    "GeometricBound",
    "LevelPartition",
    "Order",
    "PowerLawBound",
    "ProjectionResult",
    "RedundancyResult",
    "RefinementResult",
    "SequenceSpec",
    "ShtarkovResult",
    "ValidationError",
    "alpha_mixture",
    "alpha_project",
    "as_order",
    "blahut_arimoto",
    "capacity_lower",
    "chernoff",
    "chi_squared",
    "conjecture_probe",
    "divergence_curve",
    "fisher_information",
    "fisher_taylor_ratio",
    "gaussian_dichotomy",
    "gaussian_kl",
    "gaussian_renyi",
    "hellinger_sq",
    "kakutani_classify",
    "kl_divergence",
    "level_partition",
    "minimax_redundancy",
    "mixture_compose",
    "ml_capacity_input",
    "partition_divergence",
    "pinsker_check",
    "product_divergence",
    "pushforward",
    "pythagorean_gap",
    "refine_to_convergence",
    "renyi_divergence",
    "renyi_entropy",
    "shtarkov",
    "tilted",
    "total_variation",
    "tradeoff_value",
]
