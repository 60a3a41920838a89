import numpy as np
import pytest

from renyikit import DiscreteDist


def random_dist(rng, n, zero_prob=0.0):
    """Dirichlet draw on n letters, optionally with one atom zeroed."""
    p = rng.dirichlet(np.ones(n))
    if zero_prob and n > 1 and rng.random() < zero_prob:
        p[rng.integers(n)] = 0.0
        p = p / p.sum()
    return DiscreteDist.from_probs(p)


def random_pair(rng, n, zero_prob=0.0):
    return random_dist(rng, n, zero_prob), random_dist(rng, n, zero_prob)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
