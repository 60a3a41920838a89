"""Closed-form divergences for univariate Gaussians, additivity over
products, and dichotomy classification for infinite product measures.

Dichotomy verdicts are only issued against an explicit tail certificate
(a power-law or geometric comparison bound, settled by the integral
test); partial sums alone never decide equivalence or singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .distributions import (
    ORDER_INFINITY,
    ORDER_ONE,
    ORDER_SIMPLE,
    ORDER_ZERO,
    DiscreteDist,
    as_order,
)
from .divergence import renyi_divergence
from .errors import DomainError, ValidationError

__all__ = [
    "GaussianParams",
    "gaussian_renyi",
    "gaussian_kl",
    "product_divergence",
    "SequenceSpec",
    "PowerLawBound",
    "GeometricBound",
    "DichotomyResult",
    "gaussian_dichotomy",
    "kakutani_classify",
    "fisher_taylor_ratio",
    "fisher_information",
]

EQUIVALENT = "equivalent"
SINGULAR = "singular"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class GaussianParams:
    """Mean and (strictly positive) variance of a univariate normal."""

    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ValidationError("Gaussian parameters must be finite")
        if self.variance <= 0:
            raise ValidationError("variance must be strictly positive")


def gaussian_kl(g0: GaussianParams, g1: GaussianParams) -> float:
    """Kullback-Leibler divergence between univariate normals."""
    dmu = g1.mean - g0.mean
    return 0.5 * (
        dmu * dmu / g1.variance
        + math.log(g1.variance / g0.variance)
        + g0.variance / g1.variance
        - 1.0
    )


def gaussian_renyi(g0: GaussianParams, g1: GaussianParams, alpha) -> float:
    """Renyi divergence of order alpha >= 0 between univariate normals.

    For simple orders the blended variance (1 - alpha) * var0 + alpha * var1
    must stay positive; once it hits zero (possible only for alpha > 1)
    the divergence is +inf. Order infinity is the supremum of the log
    density ratio: +inf unless var1 > var0 (or the parameters coincide).
    """
    order = as_order(alpha)
    kind = order.kind
    if kind == ORDER_ZERO:
        return 0.0
    if kind == ORDER_ONE:
        return gaussian_kl(g0, g1)
    if kind == ORDER_INFINITY:
        return _gaussian_sup(g0, g1)
    if kind != ORDER_SIMPLE:
        raise DomainError("Gaussian divergence requires alpha in [0, inf]")
    a = order.value
    dmu = g1.mean - g0.mean
    var_a = (1.0 - a) * g0.variance + a * g1.variance
    if var_a <= 0.0:
        return math.inf
    log_ratio = (
        math.log(var_a)
        - (1.0 - a) * math.log(g0.variance)
        - a * math.log(g1.variance)
    )
    return 0.5 * a * dmu * dmu / var_a + 0.5 / (1.0 - a) * log_ratio


def _gaussian_sup(g0: GaussianParams, g1: GaussianParams) -> float:
    if g0 == g1:
        return 0.0
    if g1.variance <= g0.variance:
        return math.inf
    dmu = g1.mean - g0.mean
    return 0.5 * dmu * dmu / (g1.variance - g0.variance) + 0.5 * math.log(
        g1.variance / g0.variance
    )


def product_divergence(pairs: Sequence[tuple], alpha) -> float:
    """Divergence between finite products, as the sum over coordinates.

    Each pair is either two GaussianParams or two DiscreteDist over a
    shared alphabet; kinds may mix between coordinates. Infinite
    coordinates absorb the sum.
    """
    if len(pairs) == 0:
        raise ValidationError("product specification must be nonempty")
    order = as_order(alpha)
    if order.value < 0:
        raise DomainError("product divergence requires alpha in [0, inf]")
    total = 0.0
    for left, right in pairs:
        if isinstance(left, GaussianParams) and isinstance(right, GaussianParams):
            term = gaussian_renyi(left, right, order)
        elif isinstance(left, DiscreteDist) and isinstance(right, DiscreteDist):
            term = renyi_divergence(left, right, order)
        else:
            raise ValidationError(
                "each pair must be two GaussianParams or two DiscreteDist"
            )
        if term == math.inf:
            return math.inf
        total += term
    return total


@dataclass(frozen=True)
class PowerLawBound:
    """Certificate comparing nonnegative terms t_n against coeff * n**-exponent.

    An upper bound with exponent > 1 certifies a convergent series; a
    lower bound with positive coefficient and exponent <= 1 certifies a
    divergent one (integral test). The bound is checked numerically on
    the truncated prefix before it is trusted.
    """

    coeff: float
    exponent: float
    side: str  # "upper" or "lower"

    def __post_init__(self):
        if self.side not in ("upper", "lower"):
            raise ValidationError("bound side must be 'upper' or 'lower'")
        if self.coeff < 0 or math.isnan(self.coeff):
            raise ValidationError("bound coefficient must be nonnegative")

    def reference(self, n: np.ndarray) -> np.ndarray:
        return self.coeff * n ** (-self.exponent)

    def side_is_upper(self) -> bool:
        return self.side == "upper"

    def settles(self) -> str | None:
        if self.side == "upper" and self.exponent > 1.0:
            return EQUIVALENT
        if self.side == "lower" and self.exponent <= 1.0 and self.coeff > 0:
            return SINGULAR
        return None


@dataclass(frozen=True)
class GeometricBound:
    """Upper bound t_n <= coeff * ratio**n with ratio < 1 (convergent tail)."""

    coeff: float
    ratio: float

    def __post_init__(self):
        if not (0.0 < self.ratio < 1.0):
            raise ValidationError("geometric ratio must lie in (0, 1)")
        if self.coeff < 0 or math.isnan(self.coeff):
            raise ValidationError("bound coefficient must be nonnegative")

    def reference(self, n: np.ndarray) -> np.ndarray:
        return self.coeff * self.ratio**n

    def side_is_upper(self) -> bool:
        return True

    def settles(self) -> str | None:
        return EQUIVALENT


def _verdict(terms: np.ndarray, bound) -> str:
    """Apply a tail certificate to the truncated term sequence."""
    if bound is None:
        return UNDECIDED
    n = np.arange(1, terms.size + 1, dtype=float)
    ref = bound.reference(n)
    slack = 1e-12 * np.maximum(1.0, ref)
    if bound.side_is_upper():
        if np.any(terms > ref + slack):
            return UNDECIDED
    else:
        if np.any(terms < ref - slack):
            return UNDECIDED
    return bound.settles() or UNDECIDED


@dataclass(frozen=True)
class SequenceSpec:
    """Mean sequences of two infinite Gaussian products, unit variances.

    ``generator`` maps n = 1, 2, ... to the coordinate means (mu_n, nu_n);
    ``truncation`` is how far partial sums are carried; ``tail`` is an
    optional certificate on the squared gaps (mu_n - nu_n)**2.
    """

    generator: Callable[[int], tuple[float, float]]
    truncation: int
    tail: PowerLawBound | GeometricBound | None = None

    def __post_init__(self):
        if self.truncation < 1:
            raise ValidationError("truncation must be at least 1")

    def squared_gaps(self) -> np.ndarray:
        gaps = np.empty(self.truncation)
        for i in range(self.truncation):
            mu, nu = self.generator(i + 1)
            gaps[i] = (mu - nu) ** 2
        return gaps


@dataclass(frozen=True)
class DichotomyResult:
    verdict: str
    partial_sum: float
    divergence_estimate: float


def gaussian_dichotomy(spec: SequenceSpec, alpha) -> DichotomyResult:
    """Classify an infinite product of unit-variance Gaussians.

    The products are equivalent iff the squared mean gaps have a finite
    sum and mutually singular iff the sum diverges; the decision is
    delegated to the tail certificate. The reported divergence estimate
    is alpha/2 times the truncated sum.
    """
    order = as_order(alpha)
    if not (order.is_simple or order.kind == ORDER_ONE):
        raise DomainError(
            "dichotomy classification requires a finite order alpha > 0"
        )
    terms = spec.squared_gaps()
    partial = float(np.sum(terms))
    verdict = _verdict(terms, spec.tail)
    return DichotomyResult(verdict, partial, 0.5 * order.value * partial)


def kakutani_classify(values, tail_bound=None) -> str:
    """Classify an infinite product from per-coordinate divergences.

    The coordinates are assumed pairwise equivalent, so the product is
    either equivalent or mutually singular depending on whether the
    divergence series converges. A +inf coordinate means some pair is
    already mutually singular, which settles the question immediately.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size < 1:
        raise ValidationError("per-coordinate values must be a nonempty 1-d array")
    if np.isnan(vals).any() or (vals < 0).any():
        raise ValidationError("per-coordinate divergences must be nonnegative")
    if np.isinf(vals).any():
        return SINGULAR
    return _verdict(vals, tail_bound)


_FISHER_FAMILIES = ("gaussian-location", "bernoulli")


def fisher_information(family: str, theta: float, sigma: float = 1.0) -> float:
    """Fisher information of the built-in one-parameter families."""
    if family == "gaussian-location":
        return 1.0 / (sigma * sigma)
    if family == "bernoulli":
        if not 0.0 < theta < 1.0:
            raise DomainError("Bernoulli parameter must lie in (0, 1)")
        return 1.0 / (theta * (1.0 - theta))
    raise ValidationError(f"unknown family {family!r}; pick from {_FISHER_FAMILIES}")


def fisher_taylor_ratio(
    family: str, theta: float, h: float, alpha, sigma: float = 1.0
) -> float:
    """Divergence between nearby family members divided by the squared
    parameter shift; tends to alpha/2 times the Fisher information."""
    order = as_order(alpha)
    if not (order.is_simple or order.kind == ORDER_ONE):
        raise DomainError("the Fisher ratio requires a finite order alpha > 0")
    if h == 0.0:
        raise DomainError("parameter shift h must be nonzero")
    if family == "gaussian-location":
        g0 = GaussianParams(theta, sigma * sigma)
        g1 = GaussianParams(theta + h, sigma * sigma)
        div = gaussian_renyi(g0, g1, order)
    elif family == "bernoulli":
        if not (0.0 < theta < 1.0 and 0.0 < theta + h < 1.0):
            raise DomainError("Bernoulli parameters must stay inside (0, 1)")
        p = DiscreteDist.from_probs([theta, 1.0 - theta])
        q = DiscreteDist.from_probs([theta + h, 1.0 - theta - h])
        div = renyi_divergence(p, q, order)
    else:
        raise ValidationError(
            f"unknown family {family!r}; pick from {_FISHER_FAMILIES}"
        )
    return div / (h * h)
