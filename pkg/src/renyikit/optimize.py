"""Optimization primitives on the probability simplex.

Two workhorses live here: a projected-gradient loop with backtracking
line search for smooth objectives (used by the mixture projection), and
a Polyak-step subgradient loop with an adaptive optimum estimate for
nonsmooth minimax objectives (used by the capacity solvers). Both are
deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


@dataclass
class SolveStats:
    x: np.ndarray
    fx: float
    iterations: int
    converged: bool


def projected_gradient(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    tol: float,
    max_iter: int,
) -> SolveStats:
    """Minimize a smooth convex-ish objective over the simplex.

    Backtracking on the proximal decrease condition; convergence is
    declared when the unit-step projected gradient has norm below tol.
    """
    x = project_simplex(np.asarray(x0, dtype=float))
    fx = objective(x)
    step = 1.0
    iters = 0
    for _ in range(max_iter):
        iters += 1
        g = np.nan_to_num(gradient(x), nan=0.0, posinf=1e12, neginf=-1e12)
        pg = x - project_simplex(x - g)
        if np.linalg.norm(pg) < tol:
            return SolveStats(x, fx, iters, True)
        # backtrack until sufficient decrease
        accepted = False
        for _ in range(60):
            y = project_simplex(x - step * g)
            dy = y - x
            fy = objective(y)
            if fy <= fx + float(g @ dy) + 0.5 / step * float(dy @ dy) + 1e-18:
                accepted = True
                break
            step *= 0.5
        if not accepted or fy > fx or not np.any(y != x):
            # no usable decrease at the smallest step: stationary enough
            return SolveStats(x, fx, iters, bool(np.linalg.norm(pg) < tol))
        x, fx = y, fy
        step = min(step * 2.0, 16.0)
    g = gradient(x)
    pg = x - project_simplex(x - g)
    return SolveStats(x, fx, iters, bool(np.linalg.norm(pg) < tol))


def polyak_subgradient(
    oracle: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0: np.ndarray,
    tol: float,
    max_iter: int,
    gap0: float = 0.25,
    gap_floor: float = 1e-13,
    round_len: int = 60,
    max_move: float = 0.25,
    clean: Callable[[np.ndarray], np.ndarray] | None = None,
) -> SolveStats:
    """Minimize a convex function over the simplex by subgradient steps.

    The Polyak step length needs the optimal value, which is unknown, so
    the loop aims at ``best seen - gap`` and halves the gap whenever a
    round of ``round_len`` iterations fails to reach the target. The
    step is capped so one move never exceeds ``max_move`` nor cuts any
    coordinate by more than half, which keeps an optimistic target from
    flinging the iterate deep into the boundary zone where subgradients
    blow up; ``clean`` (when given) additionally nudges iterates off the
    boundary. The returned point is the best iterate; convergence means
    the gap estimate dropped below tol within the iteration budget.
    """
    def prepare(v):
        v = project_simplex(v)
        return clean(v) if clean is not None else v

    x = prepare(np.asarray(x0, dtype=float))
    fx, g = oracle(x)
    x_best, f_best = x.copy(), fx
    gap = max(gap0, 16.0 * tol)
    f_mark = f_best
    stalled = 0
    iters = 0
    while iters < max_iter and gap > gap_floor:
        iters += 1
        gnorm2 = float(g @ g)
        if gnorm2 <= 0.0 or not math.isfinite(gnorm2):
            break
        target = f_best - gap
        step = min((fx - target) / gnorm2, max_move / math.sqrt(gnorm2))
        shrinking = g > 0.0
        if shrinking.any():
            step = min(step, float(np.min(0.5 * x[shrinking] / g[shrinking])))
        x = prepare(x - step * g)
        fx, g = oracle(x)
        if fx < f_best:
            f_best = fx
            x_best = x.copy()
        if fx <= target:
            stalled = 0
            f_mark = f_best
        else:
            stalled += 1
            if stalled >= round_len:
                # halve only when the whole round moved f_best by less
                # than a tenth of the gap; otherwise progress is real and
                # the current level is still worth chasing
                if f_best > f_mark - 0.1 * gap:
                    gap *= 0.5
                f_mark = f_best
                stalled = 0
    return SolveStats(x_best, f_best, iters, gap <= tol)
