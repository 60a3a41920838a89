import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyikit import DiscreteDist, Order, ValidationError, as_order
from renyikit.distributions import validate_simplex


class TestDiscreteDist:
    def test_from_probs_normalizes_tiny_drift(self):
        d = DiscreteDist.from_probs([0.5, 0.5 + 4e-10])
        assert abs(np.exp(d.logp).sum() - 1.0) < 1e-12

    def test_rejects_large_drift(self):
        with pytest.raises(ValidationError):
            DiscreteDist.from_probs([0.5, 0.6])

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            DiscreteDist.from_probs([1.1, -0.1])

    def test_rejects_empty_and_nan(self):
        with pytest.raises(ValidationError):
            DiscreteDist.from_probs([])
        with pytest.raises(ValidationError):
            DiscreteDist.from_probs([float("nan"), 1.0])

    def test_zero_atoms_get_minus_inf(self):
        d = DiscreteDist.from_probs([0.0, 1.0])
        assert d.logp[0] == -math.inf
        assert list(d.support) == [False, True]

    def test_entries_nonpositive(self):
        d = DiscreteDist.from_probs([0.25, 0.25, 0.5])
        assert (d.logp <= 0).all()

    def test_uniform_and_point_mass(self):
        u = DiscreteDist.uniform(4)
        assert np.allclose(u.probs(), 0.25)
        pm = DiscreteDist.point_mass(2, 3)
        assert pm.probs()[2] == 1.0

    def test_conditional_on(self):
        q = DiscreteDist.uniform(4)
        p = DiscreteDist.conditional_on(q, [True, True, False, False])
        assert np.allclose(p.probs(), [0.5, 0.5, 0.0, 0.0])
        with pytest.raises(ValidationError):
            DiscreteDist.conditional_on(q, [False] * 4)

    def test_immutable(self):
        d = DiscreteDist.uniform(3)
        with pytest.raises(ValueError):
            d.logp[0] = 0.0


class TestOrder:
    @pytest.mark.parametrize(
        "value,kind",
        [
            (0.5, "simple"),
            (2.0, "simple"),
            (1e-9, "simple"),
            (0.0, "zero"),
            (1.0, "one"),
            (math.inf, "infinity"),
            (-0.5, "negative"),
            (-math.inf, "neg-infinity"),
        ],
    )
    def test_classification(self, value, kind):
        assert Order(value).kind == kind

    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            Order(float("nan"))

    def test_as_order_idempotent(self):
        o = Order(0.5)
        assert as_order(o) is o
        assert as_order(2).value == 2.0

    @given(st.floats(allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_kinds_partition_the_line(self, value):
        kind = Order(value).kind
        if value == math.inf:
            assert kind == "infinity"
        elif value == -math.inf:
            assert kind == "neg-infinity"
        elif value == 0:
            assert kind == "zero"
        elif value == 1:
            assert kind == "one"
        elif value < 0:
            assert kind == "negative"
        else:
            assert kind == "simple"


def test_validate_simplex_accepts_and_rejects():
    w = validate_simplex([0.2, 0.8])
    assert abs(w.sum() - 1.0) < 1e-15
    with pytest.raises(ValidationError):
        validate_simplex([0.2, 0.9])
    with pytest.raises(ValidationError):
        validate_simplex([1.2, -0.2])
