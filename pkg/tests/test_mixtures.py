import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_dist
from oracles import mixture_probs, projection_grid, renyi_probs
from renyikit import (
    DiscreteDist,
    DomainError,
    ValidationError,
    alpha_mixture,
    alpha_project,
    mixture_compose,
    pythagorean_gap,
    renyi_divergence,
)
from renyikit.mixtures import _ProjectionObjective

E1 = DiscreteDist.from_probs([1, 0])
E2 = DiscreteDist.from_probs([0, 1])


class TestAlphaMixture:
    def test_single_generator_is_identity(self, rng):
        g = random_dist(rng, 5)
        mix = alpha_mixture([g], [1.0], 0.7)
        assert np.allclose(mix.dist.probs(), g.probs(), atol=1e-13)
        assert mix.normalizer == pytest.approx(1.0, abs=1e-12)

    def test_order_one_is_ordinary_mixture(self, rng):
        gens = [random_dist(rng, 4) for _ in range(3)]
        lam = rng.dirichlet(np.ones(3))
        mix = alpha_mixture(gens, lam, 1.0)
        expected = lam @ np.stack([g.probs() for g in gens])
        assert np.allclose(mix.dist.probs(), expected, atol=1e-15)
        assert mix.normalizer == 1.0

    def test_half_order_disjoint_generators_hits_lower_bound(self):
        mix = alpha_mixture([E1, E2], [0.5, 0.5], 0.5)
        assert np.allclose(mix.dist.probs(), [0.5, 0.5], atol=1e-15)
        # two generators at order 1/2: bracket bottoms out at 1/2
        assert mix.normalizer == pytest.approx(0.5, abs=1e-12)

    def test_matches_probability_domain_oracle(self, rng):
        for _ in range(30):
            m, n = int(rng.integers(1, 5)), int(rng.integers(2, 7))
            gens = [random_dist(rng, n) for _ in range(m)]
            lam = rng.dirichlet(np.ones(m))
            a = float(rng.choice([0.25, 0.5, 1.0, 2.0, 4.0]))
            mix = alpha_mixture(gens, lam, a)
            ref_dist, ref_z = mixture_probs([g.probs() for g in gens], lam, a)
            assert np.allclose(mix.dist.probs(), ref_dist, atol=1e-11)
            assert mix.normalizer == pytest.approx(ref_z, abs=1e-11)

    @given(
        st.integers(1, 4),
        st.integers(2, 5),
        st.floats(0.1, 6.0),
        st.integers(0, 2**31 - 1),
    )
    @settings(max_examples=80, deadline=None)
    def test_normalizer_bracket_property(self, m, n, alpha, seed):
        rng = np.random.default_rng(seed)
        gens = [random_dist(rng, n, zero_prob=0.3) for _ in range(m)]
        lam = rng.dirichlet(np.ones(m))
        z = alpha_mixture(gens, lam, alpha).normalizer
        if alpha <= 1.0:
            assert m ** (-(1.0 - alpha) / alpha) - 1e-9 <= z <= 1.0 + 1e-9
        else:
            assert 1.0 - 1e-9 <= z <= m ** ((alpha - 1.0) / alpha) + 1e-9

    def test_validation(self, rng):
        g = random_dist(rng, 3)
        with pytest.raises(ValidationError):
            alpha_mixture([], [], 0.5)
        with pytest.raises(ValidationError):
            alpha_mixture([g], [0.9], 0.5)
        with pytest.raises(DomainError):
            alpha_mixture([g], [1.0], math.inf)
        with pytest.raises(DomainError):
            alpha_mixture([g], [1.0], 0.0)


class TestMixtureCompose:
    def test_degenerate_weight_returns_first(self, rng):
        gens = [random_dist(rng, 4) for _ in range(3)]
        ga = alpha_mixture(gens, [0.2, 0.3, 0.5], 2.0)
        gb = alpha_mixture(gens, [0.7, 0.2, 0.1], 2.0)
        comp = mixture_compose(ga, gb, [1.0, 0.0])
        assert np.allclose(comp.weights, ga.weights, atol=1e-15)

    def test_equal_weights_fixed_point(self, rng):
        gens = [random_dist(rng, 4) for _ in range(2)]
        ga = alpha_mixture(gens, [0.4, 0.6], 0.5)
        gb = alpha_mixture(gens, [0.4, 0.6], 0.5)
        comp = mixture_compose(ga, gb, [0.3, 0.7])
        assert np.allclose(comp.weights, [0.4, 0.6], atol=1e-13)

    def test_two_path_equality(self, rng):
        # composing mixtures equals mixing the generators directly
        for a in (0.5, 1.0, 2.0, 3.0):
            gens = [random_dist(rng, 5) for _ in range(3)]
            ga = alpha_mixture(gens, rng.dirichlet(np.ones(3)), a)
            gb = alpha_mixture(gens, rng.dirichlet(np.ones(3)), a)
            gamma = rng.dirichlet(np.ones(2))
            comp = mixture_compose(ga, gb, gamma)
            direct = alpha_mixture([ga.dist, gb.dist], gamma, a)
            assert np.allclose(comp.dist.probs(), direct.dist.probs(), atol=1e-12)

    def test_mismatched_inputs_rejected(self, rng):
        gens = [random_dist(rng, 4) for _ in range(2)]
        other = [random_dist(rng, 4) for _ in range(2)]
        ga = alpha_mixture(gens, [0.5, 0.5], 0.5)
        gb = alpha_mixture(other, [0.5, 0.5], 0.5)
        with pytest.raises(ValidationError):
            mixture_compose(ga, gb, [0.5, 0.5])
        gc = alpha_mixture(gens, [0.5, 0.5], 0.7)
        with pytest.raises(ValidationError):
            mixture_compose(ga, gc, [0.5, 0.5])


class TestAlphaProject:
    def test_single_generator_projects_to_itself(self, rng):
        g = random_dist(rng, 4)
        q = random_dist(rng, 4)
        res = alpha_project(q, [g], 0.5)
        assert np.allclose(res.projection.probs(), g.probs(), atol=1e-12)
        assert res.converged

    def test_target_inside_hull_gives_zero(self, rng):
        gens = [random_dist(rng, 4) for _ in range(2)]
        inside = alpha_mixture(gens, [0.3, 0.7], 2.0)
        res = alpha_project(inside.dist, gens, 2.0, tol=1e-10)
        assert res.value <= 1e-12
        assert pythagorean_gap(inside.dist, res, inside.dist, 2.0) <= 1e-12

    def test_spec_instance_matches_fine_grid(self):
        gens = [
            DiscreteDist.from_probs([0.5, 0.0, 0.5]),
            DiscreteDist.from_probs([0.0, 0.5, 0.5]),
        ]
        q = DiscreteDist.uniform(3)
        res = alpha_project(q, gens, 0.5, tol=1e-10)
        lam_ref, val_ref = projection_grid(
            [g.probs() for g in gens], q.probs(), 0.5, step=1e-3
        )
        assert res.value <= val_ref + 1e-9
        assert abs(res.weights[0] - lam_ref[0]) <= 2e-3
        assert res.converged

    def test_gradient_matches_central_differences(self, rng):
        for a in (0.3, 0.5, 1.0, 2.0, 3.5):
            m, n = 3, 5
            gens = [random_dist(rng, n) for _ in range(m)]
            q = random_dist(rng, n)
            obj = _ProjectionObjective(np.stack([g.logp for g in gens]), q, a)
            lam = 0.8 * rng.dirichlet(np.ones(m)) + 0.2 / m
            grad = obj.grad(lam)
            h = 1e-6
            for t in range(m):
                e = np.zeros(m)
                e[t] = h
                fd = (obj.value(lam + e) - obj.value(lam - e)) / (2.0 * h)
                assert grad[t] == pytest.approx(fd, rel=1e-6, abs=1e-8)

    def test_value_never_worse_than_best_generator(self, rng):
        for _ in range(10):
            gens = [random_dist(rng, 4, zero_prob=0.3) for _ in range(3)]
            q = random_dist(rng, 4)
            for a in (0.5, 1.0, 2.0):
                res = alpha_project(q, gens, a)
                best_gen = min(renyi_divergence(g, q, a) for g in gens)
                assert res.value <= best_gen + 1e-10

    def test_infinite_generators_dropped_or_rejected(self):
        q = DiscreteDist.from_probs([0.5, 0.5, 0.0])
        inside = DiscreteDist.from_probs([0.4, 0.6, 0.0])
        outside = DiscreteDist.from_probs([0.0, 0.0, 1.0])
        res = alpha_project(q, [inside, outside], 2.0)
        assert res.weights[1] == 0.0
        assert math.isfinite(res.value)
        with pytest.raises(DomainError):
            alpha_project(q, [outside], 2.0)

    def test_deterministic_across_calls(self, rng):
        gens = [random_dist(rng, 4) for _ in range(3)]
        q = random_dist(rng, 4)
        r1 = alpha_project(q, gens, 0.5, seed=11)
        r2 = alpha_project(q, gens, 0.5, seed=11)
        assert np.array_equal(r1.weights, r2.weights)
        assert r1.value == r2.value


class TestPythagoreanGap:
    def test_gap_zero_at_projection_itself(self, rng):
        gens = [random_dist(rng, 4) for _ in range(2)]
        q = random_dist(rng, 4)
        res = alpha_project(q, gens, 0.5)
        assert pythagorean_gap(res.projection, res, q, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_order_one_convex_hull_case(self, rng):
        gens = [random_dist(rng, 5) for _ in range(3)]
        q = random_dist(rng, 5)
        res = alpha_project(q, gens, 1.0, tol=1e-10)
        for _ in range(20):
            member = alpha_mixture(gens, rng.dirichlet(np.ones(3)), 1.0)
            assert pythagorean_gap(member, res, q, 1.0) >= -1e-8

    def test_property_sweep_small(self, rng):
        # grid-confirmed projections keep the inequality within solver slack
        for trial in range(20):
            a = (0.5, 1.0, 2.0)[trial % 3]
            gens = [random_dist(rng, 4) for _ in range(2)]
            q = random_dist(rng, 4)
            res = alpha_project(q, gens, a, tol=1e-10)
            _, val_ref = projection_grid([g.probs() for g in gens], q.probs(), a, 1e-2)
            assert res.value <= val_ref + 1e-8
            member = alpha_mixture(gens, rng.dirichlet(np.ones(2)), a)
            assert pythagorean_gap(member, res, q, a) >= -1e-8
