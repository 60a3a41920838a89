"""Channel capacity, minimax redundancy, and worst-case-regret optima
for finite channels.

The minimax redundancy of order alpha is the smallest worst-case
divergence of a channel row from a single distribution; it equals the
channel capacity of that order. The minimizer is found by Polyak-step
subgradient descent on the convex map Q -> max_row D_alpha(row, Q),
warm-started at the uniform row mixture (ties in the max contribute the
average of the active gradients). Order infinity has a closed form: the
optimum is the normalized-maximum-likelihood distribution, whose
worst-case regret obeys an exact offset identity against any competitor.

Iterates are kept a hair off the simplex boundary (floor 1e-12 on the
union support) so subgradients stay bounded when an order above one
meets an empty coordinate; the floor is far below every reported
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .distributions import (
    ORDER_INFINITY,
    ORDER_ONE,
    ORDER_ZERO,
    DiscreteDist,
    as_order,
    validate_simplex,
)
from .divergence import renyi_divergence
from .errors import DomainError, ValidationError
from .optimize import polyak_subgradient

__all__ = [
    "Channel",
    "RedundancyResult",
    "ShtarkovResult",
    "minimax_redundancy",
    "shtarkov",
    "ml_capacity_input",
    "capacity_lower",
    "conjecture_probe",
    "blahut_arimoto",
]

_FLOOR = 1e-12


@dataclass(frozen=True)
class Channel:
    """Finite family of distributions over one shared alphabet."""

    rows: tuple[DiscreteDist, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(self.rows)
        if len(rows) == 0:
            raise ValidationError("a channel needs at least one row")
        n = rows[0].n
        for r in rows[1:]:
            if r.n != n:
                raise ValidationError("all channel rows must share one alphabet")
        labels = tuple(self.labels) or tuple(str(i) for i in range(len(rows)))
        if len(labels) != len(rows):
            raise ValidationError("one label per row is required")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.rows[0].n

    def row_matrix(self) -> np.ndarray:
        return np.stack([r.probs() for r in self.rows])

    def logp_matrix(self) -> np.ndarray:
        return np.stack([r.logp for r in self.rows])


@dataclass(frozen=True)
class RedundancyResult:
    redundancy: float
    qopt: DiscreteDist
    per_theta: np.ndarray
    iterations: int
    converged: bool


class ShtarkovResult(NamedTuple):
    dist: DiscreteDist
    redundancy: float


class _ChannelObjective:
    """Row divergences from a candidate q, with gradients, for one order."""

    def __init__(self, logp: np.ndarray, alpha: float):
        self.lp = logp
        self.sup = logp > -math.inf
        self.union = self.sup.any(axis=0)
        self.alpha = alpha
        self.p = np.exp(logp)

    def clean(self, q: np.ndarray) -> np.ndarray:
        q = np.where(self.union, np.maximum(q, _FLOOR), q)
        return q / q.sum()

    def divergences(self, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        with np.errstate(divide="ignore"):
            lq = np.log(q)
        a = self.alpha
        if a == 0.0:
            d = -np.log(self.sup @ q)
        elif a == 1.0:
            diff = np.where(self.sup, self.lp - lq[None, :], 0.0)
            d = np.sum(self.p * diff, axis=1)
        elif a == math.inf:
            d = np.max(np.where(self.sup, self.lp - lq[None, :], -math.inf), axis=1)
        else:
            with np.errstate(invalid="ignore"):
                masked = np.where(
                    self.sup, a * self.lp + (1.0 - a) * lq[None, :], -math.inf
                )
            d = logsumexp(masked, axis=1) / (a - 1.0)
        return np.maximum(d, 0.0), lq

    def grad_rows(self, q: np.ndarray, lq: np.ndarray) -> np.ndarray:
        a = self.alpha
        if a == 0.0:
            cover = self.sup @ q
            return np.where(self.sup, -1.0 / cover[:, None], 0.0)
        if a == 1.0:
            return np.where(self.sup, -self.p / q[None, :], 0.0)
        if a == math.inf:
            ratios = np.where(self.sup, self.lp - lq[None, :], -math.inf)
            best = np.max(ratios, axis=1)
            active = ratios >= best[:, None] - 1e-12
            g = np.where(active, -1.0 / q[None, :], 0.0)
            return g / active.sum(axis=1)[:, None]
        with np.errstate(invalid="ignore"):
            masked = np.where(
                self.sup, a * self.lp + (1.0 - a) * lq[None, :], -math.inf
            )
            logg = a * (self.lp - lq[None, :]) - logsumexp(masked, axis=1)[:, None]
        return np.where(self.sup, -np.exp(logg), 0.0)

    def minimax(self, q: np.ndarray) -> tuple[float, np.ndarray]:
        d, lq = self.divergences(q)
        f = float(np.max(d))
        active = d >= f - 1e-12
        rows = self.grad_rows(q, lq)
        return f, rows[active].mean(axis=0)

    def weighted(self, q: np.ndarray, pi: np.ndarray) -> tuple[float, np.ndarray]:
        d, lq = self.divergences(q)
        f = float(pi @ d)
        rows = self.grad_rows(q, lq)
        return f, pi @ rows


def _check_capacity_order(alpha):
    order = as_order(alpha)
    if order.value < 0:
        raise DomainError("capacity problems are posed for alpha in [0, inf]")
    return order


def _bounds(obj: _ChannelObjective):
    # letters outside the union support may sit at zero; covered letters
    # stay a hair positive so divergence gradients remain finite
    lb = np.where(obj.union, 1e-15 if obj.alpha > 0.0 else 0.0, 0.0)
    return [(float(l), 1.0) for l in lb]


def _polish_minimax(obj: _ChannelObjective, q0: np.ndarray, f0: float):
    """Sequential-quadratic refinement of the subgradient iterate on the
    epigraph form: minimize t subject to every row divergence <= t."""
    n = q0.size

    if obj.alpha == math.inf:
        ti, xi = np.nonzero(obj.sup)
        lpv = obj.lp[ti, xi]

        def cons(x):
            with np.errstate(divide="ignore"):
                return x[-1] - lpv + np.log(np.maximum(x[xi], 1e-300))

        def cons_jac(x):
            jac = np.zeros((ti.size, n + 1))
            jac[np.arange(ti.size), xi] = 1.0 / np.maximum(x[xi], 1e-300)
            jac[:, -1] = 1.0
            return jac
    else:

        def cons(x):
            d, _ = obj.divergences(x[:n])
            return x[-1] - d

        def cons_jac(x):
            d, lq = obj.divergences(x[:n])
            jac = np.empty((d.size, n + 1))
            jac[:, :n] = -obj.grad_rows(x[:n], lq)
            jac[:, -1] = 1.0
            return jac

    res = minimize(
        lambda x: x[-1],
        np.concatenate([q0, [f0]]),
        jac=lambda x: np.concatenate([np.zeros(n), [1.0]]),
        method="SLSQP",
        bounds=_bounds(obj) + [(None, None)],
        constraints=[
            {"type": "ineq", "fun": cons, "jac": cons_jac},
            {
                "type": "eq",
                "fun": lambda x: np.sum(x[:n]) - 1.0,
                "jac": lambda x: np.concatenate([np.ones(n), [0.0]]),
            },
        ],
        options={"maxiter": 300, "ftol": 1e-14},
    )
    q = np.clip(res.x[:n], 0.0, None)
    return q / q.sum()


def _polish_weighted(obj: _ChannelObjective, pi: np.ndarray, q0: np.ndarray):
    """Refine the inner weighted minimization the same way."""
    n = q0.size
    if obj.alpha == math.inf:
        k = pi.size
        ti, xi = np.nonzero(obj.sup)
        lpv = obj.lp[ti, xi]
        d0, _ = obj.divergences(q0)

        def cons(x):
            with np.errstate(divide="ignore"):
                return x[n + ti] - lpv + np.log(np.maximum(x[xi], 1e-300))

        def cons_jac(x):
            jac = np.zeros((ti.size, n + k))
            jac[np.arange(ti.size), xi] = 1.0 / np.maximum(x[xi], 1e-300)
            jac[np.arange(ti.size), n + ti] = 1.0
            return jac

        res = minimize(
            lambda x: float(pi @ x[n:]),
            np.concatenate([q0, d0]),
            jac=lambda x: np.concatenate([np.zeros(n), pi]),
            method="SLSQP",
            bounds=_bounds(obj) + [(None, None)] * k,
            constraints=[
                {"type": "ineq", "fun": cons, "jac": cons_jac},
                {
                    "type": "eq",
                    "fun": lambda x: np.sum(x[:n]) - 1.0,
                    "jac": lambda x: np.concatenate([np.ones(n), np.zeros(k)]),
                },
            ],
            options={"maxiter": 300, "ftol": 1e-14},
        )
        q = np.clip(res.x[:n], 0.0, None)
        return q / q.sum()

    res = minimize(
        lambda q: obj.weighted(q, pi)[0],
        q0,
        jac=lambda q: obj.weighted(q, pi)[1],
        method="SLSQP",
        bounds=_bounds(obj),
        constraints=[
            {
                "type": "eq",
                "fun": lambda q: np.sum(q) - 1.0,
                "jac": lambda q: np.ones(n),
            }
        ],
        options={"maxiter": 300, "ftol": 1e-14},
    )
    q = np.clip(res.x, 0.0, None)
    return q / q.sum()


def minimax_redundancy(
    ch: Channel, alpha, tol: float = 1e-8, max_iter: int = 100_000
) -> RedundancyResult:
    """Minimize the worst-case row divergence over candidate distributions.

    Order infinity is solved exactly by the normalized-maximum-likelihood
    construction. The redundancy never exceeds log of the alphabet size.
    """
    order = _check_capacity_order(alpha)
    if order.kind == ORDER_INFINITY:
        s, r_inf = shtarkov(ch)
        per = np.array([renyi_divergence(row, s, order) for row in ch.rows])
        return RedundancyResult(r_inf, s, per, 0, True)

    if ch.k == 1:
        per = np.zeros(1)
        return RedundancyResult(0.0, ch.rows[0], per, 0, True)

    obj = _ChannelObjective(ch.logp_matrix(), order.value)
    mix = obj.clean(ch.row_matrix().mean(axis=0))
    uniform = np.full(ch.n, 1.0 / ch.n)
    f_mix, _ = obj.minimax(mix)
    f_uni, _ = obj.minimax(uniform)
    start = mix if f_mix <= f_uni else uniform

    stats = polyak_subgradient(
        obj.minimax, start, tol=tol, max_iter=max_iter, clean=obj.clean
    )
    q = stats.x
    polished = _polish_minimax(obj, obj.clean(q), stats.fx)
    if obj.divergences(polished)[0].max() <= stats.fx:
        q = polished
    qopt = DiscreteDist.from_probs(q)
    per = np.array([renyi_divergence(row, qopt, order) for row in ch.rows])
    return RedundancyResult(
        float(np.max(per)), qopt, per, stats.iterations, stats.converged
    )


def shtarkov(ch: Channel) -> ShtarkovResult:
    """Normalized-maximum-likelihood distribution and its log normalizer,
    which is the minimax redundancy of order infinity."""
    sup = ch.row_matrix().max(axis=0)
    total = float(sup.sum())
    return ShtarkovResult(DiscreteDist.from_probs(sup / total), math.log(total))


def ml_capacity_input(ch: Channel) -> np.ndarray:
    """Capacity-achieving input weights for order infinity.

    Each letter is assigned to its maximum-likelihood row (ties to the
    lowest row index); a row's weight is the normalized-maximum-
    likelihood mass of the letters assigned to it.
    """
    p = ch.row_matrix()
    ml = np.argmax(p, axis=0)
    s = shtarkov(ch).dist.probs()
    pi = np.zeros(ch.k)
    np.add.at(pi, ml, s)
    return pi


def capacity_lower(
    ch: Channel, pi, alpha, tol: float = 1e-8, max_iter: int = 100_000
) -> float:
    """Certified value of the inner minimization: the smallest pi-average
    of row divergences over candidate distributions.

    For any input weights this is a lower bound on the capacity, hence
    never above the minimax redundancy (up to solver tolerance).
    """
    order = _check_capacity_order(alpha)
    weights = validate_simplex(pi)
    if weights.size != ch.k:
        raise ValidationError("one input weight per channel row is required")
    obj = _ChannelObjective(ch.logp_matrix(), order.value)
    start = obj.clean(weights @ ch.row_matrix())
    stats = polyak_subgradient(
        lambda q: obj.weighted(q, weights),
        start,
        tol=tol,
        max_iter=max_iter,
        clean=obj.clean,
    )
    polished = _polish_weighted(obj, weights, obj.clean(stats.x))
    f_polished = obj.weighted(polished, weights)[0]
    return min(stats.fx, f_polished)


def conjecture_probe(ch: Channel, q: DiscreteDist, alpha, tol: float = 1e-8) -> float:
    """Gap sup_row D_alpha(row, q) - R_alpha - D_alpha(qopt, q).

    Diagnostic only for finite orders (no sign contract); at order
    infinity the gap is an exact identity and returns zero up to
    rounding. Order zero is rejected: the inequality fails there.
    """
    order = as_order(alpha)
    if not (order.is_simple or order.kind in (ORDER_ONE, ORDER_INFINITY)):
        raise DomainError("the redundancy probe requires alpha in (0, inf]")
    if q.n != ch.n:
        raise ValidationError("probe distribution must live on the channel alphabet")
    if order.kind == ORDER_INFINITY:
        s, r_inf = shtarkov(ch)
        worst = max(renyi_divergence(row, q, order) for row in ch.rows)
        return worst - r_inf - renyi_divergence(s, q, order)
    result = minimax_redundancy(ch, order, tol=tol)
    worst = max(renyi_divergence(row, q, order) for row in ch.rows)
    return worst - result.redundancy - renyi_divergence(result.qopt, q, order)


def blahut_arimoto(
    ch: Channel, tol: float = 1e-10, max_iter: int = 100_000
) -> tuple[float, np.ndarray]:
    """Alternating-minimization channel capacity at order one.

    Returns the certified capacity lower bound (the bracket width is
    below tol on exit) and the input distribution reached.
    """
    if ch.k == 1:
        return 0.0, np.ones(1)
    w = ch.row_matrix()
    lw = ch.logp_matrix()
    sup = lw > -math.inf
    pi = np.full(ch.k, 1.0 / ch.k)
    lower = 0.0
    for _ in range(max_iter):
        q = pi @ w
        with np.errstate(divide="ignore"):
            lq = np.log(q)
        d = np.sum(w * np.where(sup, lw - lq[None, :], 0.0), axis=1)
        upper = float(np.max(d))
        with np.errstate(divide="ignore"):
            lower = float(logsumexp(np.log(pi) + d))
        if upper - lower < tol:
            break
        pi = np.maximum(pi * np.exp(d - d.max()), 1e-300)
        pi = pi / pi.sum()
    return max(lower, 0.0), pi
