"""Tilted (escort) interpolations, the divergence trade-off identity,
Chernoff information, and the Pinsker-type lower bound.

The scaled divergence ``(1 - alpha) * D_alpha(P, Q)`` equals the
infimum over R of ``alpha * KL(R, P) + (1 - alpha) * KL(R, Q)``, and
when the tilted distribution exists it attains the infimum. The
Chernoff information is the saddle value: the root in alpha of
``KL(P_a, P) = KL(P_a, Q)`` maximizes the concave map
``a -> (1 - a) * D_a(P, Q)``, so a bisection on the balance and a
golden-section search on the scaled divergence must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .distributions import DiscreteDist, as_order, check_same_alphabet
from .divergence import kl_divergence, renyi_divergence, total_variation
from .errors import ConvergenceError, DomainError

__all__ = [
    "tilted",
    "tradeoff_value",
    "ChernoffResult",
    "chernoff",
    "pinsker_check",
]

_BRACKET = (1e-6, 1.0 - 1e-6)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def tilted(p: DiscreteDist, q: DiscreteDist, alpha) -> DiscreteDist:
    """Normalized geometric interpolation with density ~ p**alpha * q**(1-alpha).

    Defined for finite alpha > 0 whenever the normalizing sum is strictly
    between 0 and infinity: mutually singular pairs have a vanishing sum,
    and above order one the sum diverges unless p is absolutely
    continuous w.r.t. q. At alpha = 1 the tilt is p itself.
    """
    check_same_alphabet(p, q)
    a = as_order(alpha).value
    if not (0.0 < a < math.inf):
        raise DomainError("tilting requires a finite order alpha > 0")
    if a == 1.0:
        if bool(np.any(p.support & ~q.support)):
            raise DomainError("tilt at alpha = 1 needs p absolutely continuous w.r.t. q")
        return p
    if a > 1.0 and bool(np.any(p.support & ~q.support)):
        raise DomainError("tilt undefined: the normalizing sum diverges")
    joint = p.support & q.support
    if not joint.any():
        raise DomainError("tilt undefined: the distributions are mutually singular")
    logt = np.where(joint, a * p.logp + (1.0 - a) * q.logp, -math.inf)
    return DiscreteDist(logt - logsumexp(logt[joint]))


def tradeoff_value(p: DiscreteDist, q: DiscreteDist, alpha) -> float:
    """The scaled divergence (1 - alpha) * D_alpha(p, q) for simple alpha."""
    order = as_order(alpha)
    if not order.is_simple:
        raise DomainError("the trade-off value requires a simple order")
    return (1.0 - order.value) * renyi_divergence(p, q, order)


@dataclass(frozen=True)
class ChernoffResult:
    alpha_star: float
    value: float
    balance: float
    iterations: int
    boundary: bool = False


def _balance(p, q, a):
    t = tilted(p, q, a)
    return kl_divergence(t, p) - kl_divergence(t, q)


def chernoff(p: DiscreteDist, q: DiscreteDist, tol: float = 1e-9) -> ChernoffResult:
    """Chernoff information of the pair, with the balancing order.

    Bisection drives ``KL(P_a, P) - KL(P_a, Q)`` to zero; the value is
    cross-validated against a golden-section maximization of the scaled
    divergence and both estimates must agree within 10 * tol. When the
    balance does not change sign on the bracket the supremum sits at the
    boundary; the result then carries ``boundary=True`` instead of an
    interior root. For p = q the order is reported as 1/2 by convention.
    """
    check_same_alphabet(p, q)
    if np.array_equal(p.logp, q.logp) or renyi_divergence(p, q, 0.5) == 0.0:
        return ChernoffResult(0.5, 0.0, 0.0, 0, False)
    if not (p.support & q.support).any():
        raise DomainError("Chernoff information undefined for mutually singular pair")
    if kl_divergence(p, q) == math.inf:
        raise DomainError("Chernoff information requires KL(p, q) to be finite")

    lo, hi = _BRACKET
    f_lo, f_hi = _balance(p, q, lo), _balance(p, q, hi)
    iters = 2
    boundary = not (min(f_lo, f_hi) <= 0.0 <= max(f_lo, f_hi))
    if boundary:
        a_star, g_star, g_iters = _golden_max(p, q, lo, hi)
        return ChernoffResult(
            a_star, g_star, _balance(p, q, a_star), iters + g_iters, True
        )

    increasing = f_hi > f_lo
    a_star = 0.5 * (lo + hi)
    while hi - lo > 1e-13:
        iters += 1
        a_star = 0.5 * (lo + hi)
        f_mid = _balance(p, q, a_star)
        if abs(f_mid) <= tol and hi - lo <= 1e-9:
            break
        if (f_mid < 0.0) == increasing:
            lo = a_star
        else:
            hi = a_star
    value = (1.0 - a_star) * renyi_divergence(p, q, a_star)

    _, g_star, g_iters = _golden_max(p, q, *_BRACKET)
    if abs(value - g_star) > 10.0 * tol:
        raise ConvergenceError(
            f"bisection and golden-section disagree: {value!r} vs {g_star!r}"
        )
    return ChernoffResult(a_star, value, _balance(p, q, a_star), iters + g_iters, False)


def _golden_max(p, q, lo, hi, xtol=1e-10):
    """Golden-section maximum of the concave scaled divergence on (lo, hi)."""

    def g(a):
        return (1.0 - a) * renyi_divergence(p, q, a)

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    iters = 2
    while hi - lo > xtol:
        iters += 1
        if g1 < g2:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _GOLDEN * (hi - lo)
            g2 = g(x2)
        else:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _GOLDEN * (hi - lo)
            g1 = g(x1)
    a = 0.5 * (lo + hi)
    return a, g(a), iters


def pinsker_check(p: DiscreteDist, q: DiscreteDist, alpha) -> tuple[float, bool]:
    """Lower bound (alpha/2) * V(p, q)**2 on the divergence, and whether
    it holds (it always does for alpha in (0, 1], up to 1e-12)."""
    a = as_order(alpha).value
    if not 0.0 < a <= 1.0:
        raise DomainError("the Pinsker bound applies for alpha in (0, 1]")
    v = total_variation(p, q)
    bound = 0.5 * a * v * v
    holds = bound <= renyi_divergence(p, q, a) + 1e-12
    return bound, holds
