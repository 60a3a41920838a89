"""Finite distributions in log domain and the order parameter.

Probabilities are stored as log-probabilities with -inf marking atoms
outside the support, so that powers p**alpha never underflow for the
extreme orders the toolkit supports. Divergence values are plain floats
in [-inf, +inf]; NaN is never produced by any public operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import ValidationError

# Off-simplex inputs within this slack are renormalized, worse ones rejected.
NORMALIZATION_SLACK = 1e-9

ORDER_SIMPLE = "simple"
ORDER_ZERO = "zero"
ORDER_ONE = "one"
ORDER_INFINITY = "infinity"
ORDER_NEGATIVE = "negative"
ORDER_NEG_INFINITY = "neg-infinity"


@dataclass(frozen=True, eq=False)
class Order:
    """Order parameter alpha in [-inf, +inf].

    The kind is a pure function of the value:

    * ``simple``: alpha > 0 and alpha != 1
    * ``zero`` / ``one`` / ``infinity``: the extended orders
    * ``negative``: -inf < alpha < 0
    * ``neg-infinity``: alpha = -inf
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v):
            raise ValidationError("order must not be NaN")
        object.__setattr__(self, "value", v)

    @property
    def kind(self) -> str:
        v = self.value
        if v == math.inf:
            return ORDER_INFINITY
        if v == -math.inf:
            return ORDER_NEG_INFINITY
        if v == 0.0:
            return ORDER_ZERO
        if v == 1.0:
            return ORDER_ONE
        if v < 0.0:
            return ORDER_NEGATIVE
        return ORDER_SIMPLE

    @property
    def is_simple(self) -> bool:
        return self.kind == ORDER_SIMPLE

    def __repr__(self):
        return f"Order({self.value!r})"


def as_order(alpha) -> Order:
    """Coerce a float or Order to an Order."""
    if isinstance(alpha, Order):
        return alpha
    return Order(float(alpha))


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """Probability distribution on a finite alphabet, kept in log domain.

    ``logp`` has one entry per letter; entries are <= 0, with -inf for
    letters outside the support. The exponentials sum to one.
    """

    logp: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.logp, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidationError("logp must be a nonempty 1-d array")
        if np.isnan(arr).any():
            raise ValidationError("logp must not contain NaN")
        if (arr == math.inf).any():
            raise ValidationError("logp must not contain +inf")
        total = float(np.exp(logsumexp(arr))) if np.isfinite(arr).any() else 0.0
        if abs(total - 1.0) > NORMALIZATION_SLACK:
            raise ValidationError(
                f"probabilities sum to {total:.12g}, more than "
                f"{NORMALIZATION_SLACK:g} away from 1"
            )
        arr = arr - logsumexp(arr)
        # log of values slightly above 1 after renormalization is noise
        arr = np.minimum(arr, 0.0)
        arr.setflags(write=False)
        object.__setattr__(self, "logp", arr)

    @classmethod
    def from_probs(cls, probs) -> "DiscreteDist":
        """Build from plain probabilities; zeros map to -inf logs."""
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("probabilities must be a nonempty 1-d array")
        if np.isnan(p).any() or (p < 0).any():
            raise ValidationError("probabilities must be nonnegative")
        with np.errstate(divide="ignore"):
            return cls(np.log(p))

    @classmethod
    def uniform(cls, n: int) -> "DiscreteDist":
        if n < 1:
            raise ValidationError("alphabet size must be at least 1")
        return cls(np.full(n, -math.log(n)))

    @classmethod
    def point_mass(cls, i: int, n: int) -> "DiscreteDist":
        p = np.zeros(n)
        p[i] = 1.0
        return cls.from_probs(p)

    @classmethod
    def conditional_on(cls, base: "DiscreteDist", event) -> "DiscreteDist":
        """Restrict ``base`` to the letters flagged in ``event``."""
        mask = np.asarray(event, dtype=bool)
        if mask.shape != base.logp.shape:
            raise ValidationError("event mask must match the alphabet")
        logp = np.where(mask, base.logp, -math.inf)
        if not np.isfinite(logp).any():
            raise ValidationError("conditioning event has zero probability")
        return cls(logp - logsumexp(logp))

    @property
    def n(self) -> int:
        return self.logp.size

    @property
    def support(self) -> np.ndarray:
        return self.logp > -math.inf

    def probs(self) -> np.ndarray:
        return np.exp(self.logp)

    def prob_of(self, event) -> float:
        """Probability of the letter set flagged in ``event``."""
        mask = np.asarray(event, dtype=bool)
        masked = self.logp[mask]
        if masked.size == 0 or not np.isfinite(masked).any():
            return 0.0
        return float(np.exp(logsumexp(masked)))

    def __repr__(self):
        return f"DiscreteDist({np.array2string(self.probs(), precision=6)})"


def check_same_alphabet(p: DiscreteDist, q: DiscreteDist):
    if p.n != q.n:
        raise ValidationError(
            f"alphabet sizes differ: {p.n} vs {q.n}"
        )


def validate_simplex(weights, slack: float = NORMALIZATION_SLACK) -> np.ndarray:
    """Check a weight vector lies on the simplex; renormalize tiny drift."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise ValidationError("weights must be a nonempty 1-d array")
    if np.isnan(w).any() or (w < -slack).any():
        raise ValidationError("weights must be nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > slack:
        raise ValidationError(
            f"weights sum to {total:.12g}, more than {slack:g} away from 1"
        )
    return np.clip(w, 0.0, None) / np.clip(w, 0.0, None).sum()
