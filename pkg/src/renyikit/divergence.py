"""Renyi divergence of every order for finite distributions.

All Hellinger-integral sums are evaluated by log-sum-exp over the joint
support, after an atom-level convention table decides which atoms force
the value to 0 or infinity:

* p = 0, q = 0: the atom contributes nothing for every order;
* p > 0, q = 0: the whole divergence is +inf for alpha > 1, the atom
  contributes nothing for 0 < alpha < 1;
* p = 0, q > 0: nothing for alpha > 0, but for alpha < 0 the whole
  divergence is -inf (the reciprocal convention applies).

Order 1 always goes through the dedicated Kullback-Leibler path, never
through the simple-order formula, so the identity with the limit is
exact. Negative orders use the same formula with the exponent roles
reversed; the order -inf delegates to the order +inf with the arguments
swapped and the sign flipped.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .distributions import (
    ORDER_INFINITY,
    ORDER_NEG_INFINITY,
    ORDER_ONE,
    ORDER_ZERO,
    DiscreteDist,
    as_order,
    check_same_alphabet,
)
from .errors import DomainError, ValidationError

__all__ = [
    "renyi_divergence",
    "kl_divergence",
    "hellinger_sq",
    "chi_squared",
    "total_variation",
    "renyi_entropy",
    "divergence_curve",
    "pushforward",
]


def renyi_divergence(p: DiscreteDist, q: DiscreteDist, alpha) -> float:
    """Renyi divergence of order alpha of ``p`` from ``q``, in nats.

    Supports every order in [-inf, +inf]. Values lie in [0, +inf] for
    alpha >= 0 and in [-inf, 0] for alpha < 0.
    """
    check_same_alphabet(p, q)
    order = as_order(alpha)
    if np.array_equal(p.logp, q.logp):
        return 0.0
    kind = order.kind
    if kind == ORDER_ZERO:
        value = _order_zero(p, q)
    elif kind == ORDER_ONE:
        value = kl_divergence(p, q)
    elif kind == ORDER_INFINITY:
        value = _sup_log_ratio(p, q)
    elif kind == ORDER_NEG_INFINITY:
        value = -_sup_log_ratio(q, p)
    else:
        value = _hellinger_formula(p, q, order.value)
    # the exact value is sign-definite; strip rounding noise at zero
    if order.value >= 0:
        return value if value > 0.0 else 0.0
    return value if value < 0.0 else 0.0


def _order_zero(p: DiscreteDist, q: DiscreteDist) -> float:
    # -log Q(p > 0)
    mass = q.logp[p.support]
    if mass.size == 0 or not np.isfinite(mass).any():
        return math.inf
    return float(-logsumexp(mass))


def _sup_log_ratio(p: DiscreteDist, q: DiscreteDist) -> float:
    # log of the largest p/q ratio over the support of p; x/0 = inf
    sp = p.support
    ratios = p.logp[sp] - q.logp[sp]
    return float(np.max(ratios))


def _hellinger_formula(p: DiscreteDist, q: DiscreteDist, alpha: float) -> float:
    sp, sq = p.support, q.support
    if alpha > 1.0 and bool(np.any(sp & ~sq)):
        return math.inf
    if alpha < 0.0 and bool(np.any(~sp & sq)):
        return -math.inf
    joint = sp & sq
    if not joint.any():
        # reachable only for 0 < alpha < 1: mutually singular pair
        return math.inf
    terms = alpha * p.logp[joint] + (1.0 - alpha) * q.logp[joint]
    return float(logsumexp(terms) / (alpha - 1.0))


def kl_divergence(p: DiscreteDist, q: DiscreteDist) -> float:
    """Kullback-Leibler divergence, with 0 log(0/q) = 0 and p log(p/0) = inf."""
    check_same_alphabet(p, q)
    sp = p.support
    if bool(np.any(sp & ~q.support)):
        return math.inf
    lp = p.logp[sp]
    lq = q.logp[sp]
    value = float(np.sum(np.exp(lp) * (lp - lq)))
    return value if value > 0.0 else 0.0


def hellinger_sq(p: DiscreteDist, q: DiscreteDist) -> float:
    """Squared Hellinger distance, in [0, 2]."""
    check_same_alphabet(p, q)
    diff = np.exp(0.5 * p.logp) - np.exp(0.5 * q.logp)
    return float(np.sum(diff * diff))


def chi_squared(p: DiscreteDist, q: DiscreteDist) -> float:
    """Chi-squared divergence sum (p - q)^2 / q, in [0, inf]."""
    check_same_alphabet(p, q)
    sq = q.support
    if bool(np.any(p.support & ~sq)):
        return math.inf
    pv = np.exp(p.logp[sq])
    qv = np.exp(q.logp[sq])
    return float(np.sum((pv - qv) ** 2 / qv))


def total_variation(p: DiscreteDist, q: DiscreteDist) -> float:
    """Total variation distance sum |p - q|, in [0, 2]."""
    check_same_alphabet(p, q)
    return float(np.sum(np.abs(np.exp(p.logp) - np.exp(q.logp))))


def renyi_entropy(p: DiscreteDist, alpha) -> float:
    """Renyi entropy of order alpha in [0, inf], as log n minus the
    divergence from the uniform distribution."""
    order = as_order(alpha)
    if order.value < 0:
        raise DomainError("Renyi entropy requires alpha >= 0")
    uniform = DiscreteDist.uniform(p.n)
    return math.log(p.n) - renyi_divergence(p, uniform, order)


def divergence_curve(p: DiscreteDist, q: DiscreteDist, alphas) -> list[float]:
    """Divergence evaluated along an ascending grid of orders.

    The resulting sequence is nondecreasing in the order.
    """
    values = [as_order(a).value for a in alphas]
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValidationError("orders must be sorted ascending")
    return [renyi_divergence(p, q, a) for a in values]


def pushforward(w, p: DiscreteDist) -> DiscreteDist:
    """Push ``p`` through a row-stochastic matrix ``w`` (n rows, m columns)."""
    mat = np.asarray(w, dtype=float)
    if mat.ndim != 2:
        raise ValidationError("stochastic matrix must be 2-d")
    if mat.shape[0] != p.n:
        raise ValidationError(
            f"matrix has {mat.shape[0]} rows but the alphabet has {p.n} letters"
        )
    if np.isnan(mat).any() or (mat < 0).any():
        raise ValidationError("stochastic matrix entries must be nonnegative")
    rowsums = mat.sum(axis=1)
    if np.max(np.abs(rowsums - 1.0)) > 1e-9:
        raise ValidationError("rows of the stochastic matrix must sum to 1")
    with np.errstate(divide="ignore"):
        logw = np.log(mat)
    out = logsumexp(p.logp[:, None] + logw, axis=0)
    return DiscreteDist(out)
