import math

import numpy as np
import pytest

from conftest import random_pair
from oracles import gaussian_hellinger_quadrature
from renyikit import (
    DiscreteDist,
    DomainError,
    GaussianParams,
    GeometricBound,
    PowerLawBound,
    SequenceSpec,
    ValidationError,
    fisher_information,
    fisher_taylor_ratio,
    gaussian_dichotomy,
    gaussian_kl,
    gaussian_renyi,
    kakutani_classify,
    product_divergence,
    renyi_divergence,
)

STD = GaussianParams(0.0, 1.0)
SHIFTED = GaussianParams(1.0, 1.0)


class TestGaussianRenyi:
    def test_unit_shift_scales_linearly_in_order(self):
        for alpha in (0.25, 0.5, 1.0, 2.0, 5.0):
            assert gaussian_renyi(STD, SHIFTED, alpha) == pytest.approx(
                alpha / 2.0, abs=1e-14
            )

    def test_equal_parameters_zero(self):
        for alpha in (0.0, 0.5, 1.0, 2.0, math.inf):
            assert gaussian_renyi(STD, GaussianParams(0.0, 1.0), alpha) == 0.0

    def test_variance_pair_against_quadrature_oracle(self):
        # frozen from the quadrature oracle; equals log(2/sqrt(3))
        oracle = gaussian_hellinger_quadrature(0.0, 1.0, 0.0, 2.0, 2.0)
        assert oracle == pytest.approx(0.1438410362258904, abs=1e-9)
        assert gaussian_renyi(STD, GaussianParams(0.0, 2.0), 2.0) == pytest.approx(
            0.1438410362258904, abs=1e-14
        )

    def test_random_pairs_against_quadrature(self, rng):
        # modest separations keep the tilted integrand inside the grid,
        # where trapezoid quadrature is trustworthy
        for _ in range(5):
            g0 = GaussianParams(float(rng.uniform(-0.75, 0.75)), float(rng.uniform(0.5, 2.0)))
            g1 = GaussianParams(float(rng.uniform(-0.75, 0.75)), float(rng.uniform(0.5, 2.0)))
            for alpha in (0.5, 1.0, 1.5):
                assert gaussian_renyi(g0, g1, alpha) == pytest.approx(
                    gaussian_hellinger_quadrature(
                        g0.mean, g0.variance, g1.mean, g1.variance, alpha, span=16.0
                    ),
                    abs=1e-7,
                )

    def test_blended_variance_hitting_zero_is_infinite(self):
        # above order one the blend (1-a)v0 + a*v1 can vanish
        g0 = GaussianParams(0.0, 2.0)
        g1 = GaussianParams(0.0, 1.0)
        assert gaussian_renyi(g0, g1, 2.0) == math.inf
        assert gaussian_renyi(g0, g1, 1.9) < math.inf

    def test_kl_closed_form(self):
        g0 = GaussianParams(0.0, 1.0)
        g1 = GaussianParams(1.0, 2.0)
        expected = 0.5 * (1.0 / 2.0 + math.log(2.0) + 0.5 - 1.0)
        assert gaussian_kl(g0, g1) == pytest.approx(expected, abs=1e-15)
        assert gaussian_renyi(g0, g1, 1.0) == gaussian_kl(g0, g1)

    def test_sup_order_finite_iff_second_variance_larger(self):
        wide = GaussianParams(1.0, 2.0)
        # sup of the log density ratio, computed at its stationary point
        x_star = (wide.mean / wide.variance - STD.mean / STD.variance) / (
            1.0 / wide.variance - 1.0 / STD.variance
        )
        direct = (
            0.5 * math.log(wide.variance / STD.variance)
            - 0.5 * (x_star - STD.mean) ** 2 / STD.variance
            + 0.5 * (x_star - wide.mean) ** 2 / wide.variance
        )
        assert gaussian_renyi(STD, wide, math.inf) == pytest.approx(direct, abs=1e-12)
        assert gaussian_renyi(wide, STD, math.inf) == math.inf
        assert gaussian_renyi(STD, SHIFTED, math.inf) == math.inf

    def test_sup_order_is_the_increasing_limit(self):
        wide = GaussianParams(0.5, 3.0)
        limit = gaussian_renyi(STD, wide, math.inf)
        values = [gaussian_renyi(STD, wide, a) for a in (2.0, 8.0, 32.0, 512.0, 8192.0)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert values[-1] == pytest.approx(limit, rel=1e-3)

    def test_monotone_in_order_on_finite_region(self, rng):
        for _ in range(20):
            g0 = GaussianParams(float(rng.normal()), float(rng.uniform(0.3, 3.0)))
            g1 = GaussianParams(float(rng.normal()), float(rng.uniform(0.3, 3.0)))
            grid = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, math.inf]
            vals = [gaussian_renyi(g0, g1, a) for a in grid]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_rejects_negative_order_and_bad_variance(self):
        with pytest.raises(DomainError):
            gaussian_renyi(STD, SHIFTED, -1.0)
        with pytest.raises(ValidationError):
            GaussianParams(0.0, 0.0)


class TestProductDivergence:
    def test_two_unit_shifts_at_half(self):
        pairs = [(STD, SHIFTED), (STD, SHIFTED)]
        assert product_divergence(pairs, 0.5) == pytest.approx(0.5, abs=1e-14)

    def test_equal_pairs_vanish(self):
        pairs = [(STD, STD), (SHIFTED, SHIFTED)]
        assert product_divergence(pairs, 2.0) == 0.0

    def test_mixed_kinds_sum(self, rng):
        p, q = random_pair(rng, 4)
        pairs = [(STD, SHIFTED), (p, q)]
        expected = gaussian_renyi(STD, SHIFTED, 0.5) + renyi_divergence(p, q, 0.5)
        assert product_divergence(pairs, 0.5) == pytest.approx(expected, abs=1e-14)

    def test_infinite_coordinate_absorbs(self):
        p = DiscreteDist.from_probs([1, 0])
        q = DiscreteDist.from_probs([0, 1])
        assert product_divergence([(STD, SHIFTED), (p, q)], 2.0) == math.inf

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            product_divergence([], 0.5)


class TestDichotomy:
    def test_zero_gaps_equivalent(self):
        spec = SequenceSpec(lambda n: (0.0, 0.0), 64, PowerLawBound(0.0, 2.0, "upper"))
        res = gaussian_dichotomy(spec, 0.5)
        assert res.verdict == "equivalent"
        assert res.partial_sum == 0.0
        assert res.divergence_estimate == 0.0

    def test_inverse_linear_gaps_equivalent(self):
        spec = SequenceSpec(
            lambda n: (1.0 / n, 0.0), 2000, PowerLawBound(1.0, 2.0, "upper")
        )
        res = gaussian_dichotomy(spec, 1.0)
        assert res.verdict == "equivalent"
        target = math.pi**2 / 6.0
        # integral test brackets the tail: sum to N is within 1/N of the limit
        assert target - 1.0 / 2000 <= res.partial_sum <= target
        assert res.divergence_estimate == pytest.approx(0.5 * res.partial_sum)

    def test_inverse_sqrt_gaps_singular(self):
        spec = SequenceSpec(
            lambda n: (1.0 / math.sqrt(n), 0.0), 500, PowerLawBound(1.0, 1.0, "lower")
        )
        assert gaussian_dichotomy(spec, 1.0).verdict == "singular"

    def test_no_certificate_undecided(self):
        spec = SequenceSpec(lambda n: (1.0 / n, 0.0), 100, None)
        assert gaussian_dichotomy(spec, 0.5).verdict == "undecided"

    def test_violated_certificate_undecided(self):
        spec = SequenceSpec(
            lambda n: (1.0, 0.0), 16, PowerLawBound(1.0, 2.0, "upper")
        )
        assert gaussian_dichotomy(spec, 0.5).verdict == "undecided"

    def test_extended_orders_rejected(self):
        spec = SequenceSpec(lambda n: (0.0, 0.0), 4)
        for alpha in (0.0, math.inf, -1.0):
            with pytest.raises(DomainError):
                gaussian_dichotomy(spec, alpha)


class TestKakutani:
    def test_all_zero_equivalent(self):
        bound = PowerLawBound(0.0, 2.0, "upper")
        assert kakutani_classify(np.zeros(32), bound) == "equivalent"

    def test_geometric_values_with_certificate(self):
        values = [2.0**-n for n in range(1, 40)]
        assert kakutani_classify(values, GeometricBound(1.0, 0.5)) == "equivalent"

    def test_constant_positive_values_singular(self):
        values = [0.25] * 50
        assert kakutani_classify(values, PowerLawBound(0.25, 0.0, "lower")) == "singular"

    def test_infinite_coordinate_is_singular_immediately(self):
        assert kakutani_classify([0.1, math.inf, 0.1]) == "singular"

    def test_without_certificate_undecided(self):
        assert kakutani_classify([0.1, 0.01, 0.001]) == "undecided"

    def test_rejects_negative_values(self):
        with pytest.raises(ValidationError):
            kakutani_classify([-0.1, 0.2])


class TestFisherRatio:
    def test_gaussian_location_every_order(self):
        for alpha in (0.5, 1.0, 2.0):
            ratio = fisher_taylor_ratio("gaussian-location", 0.0, 1e-3, alpha)
            assert ratio == pytest.approx(alpha / 2.0, abs=1e-4)

    def test_order_one_recovers_half_fisher_information(self):
        ratio = fisher_taylor_ratio("gaussian-location", 2.0, 1e-4, 1.0, sigma=1.5)
        assert ratio == pytest.approx(0.5 * fisher_information("gaussian-location", 2.0, 1.5), rel=1e-6)

    def test_bernoulli_richardson_sweep(self):
        target = fisher_information("bernoulli", 0.3)  # 1 / (0.3 * 0.7)
        errs = [
            abs(fisher_taylor_ratio("bernoulli", 0.3, h, 2.0) - target)
            for h in (1e-2, 1e-3, 1e-4)
        ]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-2 * target

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            fisher_taylor_ratio("bernoulli", 0.99, 0.02, 1.0)
        with pytest.raises(DomainError):
            fisher_taylor_ratio("gaussian-location", 0.0, 0.0, 1.0)
        with pytest.raises(ValidationError):
            fisher_taylor_ratio("poisson", 1.0, 1e-3, 1.0)
