"""Closed-form distribution and bound layer.

The heavier oracle comparisons (pattern enumeration, density quadrature,
simulation sweeps) live in test_acceptance; here each operation is checked
against hand values, reductions, and cross-path agreement.
"""

import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from beamsim.analytic import (
    SparseModel,
    bernoulli_p,
    max_exp_log_moment,
    max_exp_log_moment_quad,
    opt_power_cdf,
    opt_power_pdf_bound,
    opt_power_pdf_exact,
    se_lower,
    se_sparse_approx,
    se_upper_nakagami,
    se_upper_nakagami_eval,
    se_upper_rayleigh,
    snr_scale,
    surrogate_rate,
)
from beamsim.beam import BeamGrid
from beamsim.channel import LinkBudget
from beamsim.errors import SeriesCancellationError
from beamsim.specfun import EULER_GAMMA


class TestBernoulliP:
    def test_values(self):
        assert bernoulli_p(1.9, 121) == pytest.approx(1 - math.exp(-1.9 / 121), rel=1e-14)
        assert bernoulli_p(1.9, 121) == pytest.approx(0.0155803, abs=1e-6)
        assert bernoulli_p(1e-12, 5) == pytest.approx(2e-13, rel=1e-3)

    def test_all_empty_identity(self):
        p = bernoulli_p(1.9, 121)
        assert (1 - p) ** 121 == pytest.approx(math.exp(-1.9), rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            bernoulli_p(0.0, 10)
        with pytest.raises(ValueError):
            bernoulli_p(1.0, 0)


class TestSnrScale:
    def test_reference_point(self):
        link = LinkBudget(intercept_c=0.01, distance_d=1.0, alpha=2.0, noise_power=1.0, lambda0=1.9)
        grid = BeamGrid.from_counts(11, 11)
        s = snr_scale(link, grid)
        assert s.k == pytest.approx(0.0052632, abs=1e-7)
        assert s.rho == pytest.approx(0.636842, abs=1e-6)
        assert s.rho == pytest.approx(grid.b * s.k, rel=1e-14)

    def test_omni(self):
        link = LinkBudget(intercept_c=0.01, distance_d=1.0, alpha=2.0, noise_power=1.0, lambda0=1.9)
        s = snr_scale(link, BeamGrid.from_counts(1, 1))
        assert s.rho == s.k

    def test_gain_linearity(self):
        link = LinkBudget(intercept_c=0.01, distance_d=1.0, alpha=2.0, noise_power=1.0, lambda0=1.9)
        s1 = snr_scale(link, BeamGrid.from_counts(10, 10))
        s2 = snr_scale(link, BeamGrid.from_counts(20, 10))
        assert s2.rho == pytest.approx(2 * s1.rho, rel=1e-14)
        assert s2.k == s1.k


class TestOptPowerCdf:
    def test_hand_value(self):
        model = SparseModel.from_p(0.5, 2, 1.0)
        assert opt_power_cdf(math.log(2.0), model) == pytest.approx(0.4166667, abs=1e-7)

    def test_endpoints(self):
        model = SparseModel.from_occupancy(1.9, 121, 3.2)
        assert opt_power_cdf(0.0, model) == 0.0
        assert opt_power_cdf(1e6, model) == pytest.approx(1.0, abs=1e-12)

    def test_monotone(self):
        model = SparseModel.from_occupancy(1.9, 121, 3.2)
        grid = np.linspace(0.0, 20.0, 400)
        vals = [opt_power_cdf(float(x), model) for x in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_matches_two_pair_enumeration(self):
        # exact check against direct enumeration of a 2-pair Bernoulli max
        p, x = 0.3, 0.8
        model = SparseModel.from_p(p, 2, 1.0)
        g = -math.expm1(-x)
        direct = (2 * p * (1 - p) * g + p * p * g * g) / (1 - (1 - p) ** 2)
        assert opt_power_cdf(x, model) == pytest.approx(direct, rel=1e-12)


class TestSurrogateDensity:
    def test_m1_reduction(self):
        # at m = 1 the surrogate rate is 1 and the density collapses
        model = SparseModel.from_p(0.2, 10, 1.0)
        assert surrogate_rate(1.0) == pytest.approx(1.0, rel=1e-14)
        for x in (0.0, 0.3, 1.7, 6.0):
            expected = (
                0.2 * 10 / (1 - 0.8**10)
                * (1 - 0.2 * math.exp(-x)) ** 9
                * math.exp(-x)
            )
            assert opt_power_pdf_bound(x, model) == pytest.approx(expected, rel=1e-12)

    def test_normalization(self):
        for p, b, m in ((0.0156, 121, 3.0), (0.003, 625, 3.0), (0.05, 40, 2.5)):
            model = SparseModel.from_p(p, b, m)
            val, _ = integrate.quad(
                lambda x: opt_power_pdf_bound(x, model), 0, np.inf, limit=400
            )
            assert val == pytest.approx(1.0, abs=1e-6)

    def test_zero_behavior(self):
        assert opt_power_pdf_bound(0.0, SparseModel.from_p(0.1, 9, 3.0)) == 0.0
        assert opt_power_pdf_bound(0.0, SparseModel.from_p(0.1, 9, 0.5)) == math.inf

    def test_exact_density_integrates_to_one(self):
        for p, b, m in ((0.0156, 121, 1.0), (0.01, 100, 3.2)):
            model = SparseModel.from_p(p, b, m)
            val, _ = integrate.quad(
                lambda x: opt_power_pdf_exact(x, model), 0, np.inf, limit=400
            )
            assert val == pytest.approx(1.0, abs=1e-8)

    def test_exact_density_matches_cdf_derivative(self):
        model = SparseModel.from_p(0.05, 30, 2.2)
        for x in (0.2, 0.9, 2.5):
            h = 1e-6
            fd = (opt_power_cdf(x + h, model) - opt_power_cdf(x - h, model)) / (2 * h)
            assert opt_power_pdf_exact(x, model) == pytest.approx(fd, rel=1e-5)


class TestSeLowerAndSparse:
    def test_reference_value(self):
        model = SparseModel.from_occupancy(1.9, 121, 1.0)
        assert se_lower(model, 0.636842) == pytest.approx(0.41907, abs=2e-5)

    def test_tiny_occupancy(self):
        model = SparseModel.from_occupancy(1e-9, 121, 1.0)
        assert se_lower(model, 1.0) == pytest.approx(0.0, abs=1e-9)

    def test_large_b_limit(self):
        # (1-p)^B = exp(-lambda0) exactly, so the B -> inf limit is reached already
        lam0, rho = 1.7, 2.0
        model = SparseModel.from_occupancy(lam0, 10**6, 1.0)
        assert se_lower(model, rho) == pytest.approx(
            (-math.expm1(-lam0)) * math.log1p(rho), rel=1e-12
        )

    def test_sparse_zero(self):
        assert se_sparse_approx(0.0, 1.0) == 0.0

    def test_sparse_dominates_both_bounds(self):
        # lambda0 ln(1+rho) upper-envelopes both expressions and converges to
        # them in the doubly sparse regime (small lambda0 AND small rho)
        lam0, b, rho = 0.1, 10_000, 0.05
        model = SparseModel.from_occupancy(lam0, b, 1.0)
        sparse = se_sparse_approx(lam0, rho)
        lower = se_lower(model, rho)
        upper = se_upper_rayleigh(model, rho)
        assert sparse >= upper >= 0.0
        assert sparse >= lower >= 0.0
        assert (sparse - lower) / lower <= 0.06
        assert (sparse - upper) / upper <= 0.06

    def test_looseness_outside_sparse_regime(self):
        model = SparseModel.from_occupancy(1.9, 121, 1.0)
        rho = 0.6368
        assert se_sparse_approx(1.9, rho) == pytest.approx(0.93626, abs=2e-4)
        assert se_sparse_approx(1.9, rho) > se_lower(model, rho)


class TestSeUpperRayleigh:
    def test_reference_value(self):
        model = SparseModel.from_occupancy(1.25, 625, 1.0)
        assert se_upper_rayleigh(model, 5.0) == pytest.approx(1.398025, abs=1e-5)

    def test_bounded_by_sparse_chain(self):
        # the scaled-E1 log bound forces upper <= p B ln(1 + rho)
        for lam0 in (0.3, 1.0, 1.9, 3.5):
            for b in (121, 625):
                for rho in (0.1, 1.0, 5.0, 40.0):
                    model = SparseModel.from_occupancy(lam0, b, 1.0)
                    assert se_upper_rayleigh(model, rho) <= model.p * b * math.log1p(rho) + 1e-12

    def test_log_growth_rate(self):
        # for rho -> inf the bound grows like p B (1 - (1-e^-lam0)/2) ln rho
        lam0, b = 1.25, 625
        model = SparseModel.from_occupancy(lam0, b, 1.0)
        rho = 1e8
        c = (-math.expm1(-lam0)) / 2.0
        asym = model.p * b * (
            (math.log(rho) - EULER_GAMMA) - c * (math.log(rho / 2.0) - EULER_GAMMA)
        )
        assert se_upper_rayleigh(model, rho) == pytest.approx(asym, rel=1e-6)

    def test_lower_below_upper_on_grid(self):
        for lam0 in np.linspace(1.0, 3.5, 11):
            for b in (121, 625):
                model = SparseModel.from_occupancy(float(lam0), b, 1.0)
                rho = b * 0.01 / float(lam0)
                assert se_lower(model, rho) <= se_upper_rayleigh(model, rho)


class TestSeUpperNakagami:
    def test_series_matches_quadrature_m1(self):
        model = SparseModel.from_occupancy(1.25, 625, 1.0)
        ev_s = se_upper_nakagami_eval(model, 5.0, method="series")
        ev_q = se_upper_nakagami_eval(model, 5.0, method="quadrature")
        assert ev_s.method == "series"
        assert ev_s.value == pytest.approx(ev_q.value, rel=1e-6)

    def test_series_matches_quadrature_integer_shapes(self):
        # certified series points across shapes with shallow outer tails
        for lam0, b, m in ((0.6, 625, 2.0), (0.3, 400, 3.0), (1.0, 121, 2.4)):
            model = SparseModel.from_occupancy(lam0, b, m)
            rho = b * 0.01 / lam0
            ev_s = se_upper_nakagami_eval(model, rho, method="series")
            ev_q = se_upper_nakagami_eval(model, rho, method="quadrature")
            assert ev_s.value == pytest.approx(ev_q.value, rel=1e-6)

    def test_auto_falls_back_when_uncertifiable(self):
        # deep outer tail at mhat = 3 needs ~40-term alternating sums
        model = SparseModel.from_occupancy(3.5, 625, 3.2)
        with pytest.raises(SeriesCancellationError):
            se_upper_nakagami_eval(model, 1.7857, method="series")
        ev = se_upper_nakagami_eval(model, 1.7857, method="auto")
        assert ev.method == "quadrature"
        assert ev.value > 0.0

    def test_m1_equals_exact_bernoulli_se(self):
        # at m = 1 the surrogate is exact, so the "bound" is the model SE
        p, b, rho = 0.002, 625, 5.0
        model = SparseModel.from_p(p, b, 1.0)
        exact, _ = integrate.quad(
            lambda P: rho / (1 + rho * P) * (-np.expm1(b * np.log1p(-p * np.exp(-P)))),
            0,
            np.inf,
            limit=400,
        )
        assert se_upper_nakagami(model, rho) == pytest.approx(exact, rel=1e-8)

    def test_shape_below_one_uses_quadrature(self):
        model = SparseModel.from_occupancy(1.9, 121, 0.7)
        ev = se_upper_nakagami_eval(model, 0.6368, method="auto")
        assert ev.method == "quadrature"
        with pytest.raises(ValueError):
            se_upper_nakagami(model, 0.6368, method="series")

    def test_vanishes_at_zero_snr(self):
        model = SparseModel.from_occupancy(1.9, 121, 3.2)
        assert se_upper_nakagami(model, 1e-9) == pytest.approx(0.0, abs=1e-8)

    def test_inner_sum_certification_helpers(self):
        for n in (1, 2, 5, 12):
            s = max_exp_log_moment(n, 1.6509636, 2.0)
            q = max_exp_log_moment_quad(n, 1.6509636, 2.0)
            assert s == pytest.approx(q, rel=1e-9)

    def test_monotone_in_rho(self):
        model = SparseModel.from_occupancy(1.9, 121, 3.2)
        rhos = np.logspace(-2, 1.5, 25)
        vals = [se_upper_nakagami(model, float(r)) for r in rhos]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestSmallInstanceOracle:
    def test_pattern_vs_exact_density(self):
        # exhaustive occupancy patterns against the closed-form max density
        b, p, rho = 2, 0.5, 1.0
        model = SparseModel.from_p(p, b, 1.0)

        total = 0.0
        for pattern in itertools.product((0, 1), repeat=b):
            k = sum(pattern)
            if k == 0:
                continue
            prob = p**k * (1 - p) ** (b - k)
            val, _ = integrate.quad(
                lambda x, k=k: math.log1p(rho * x) * k * (1 - math.exp(-x)) ** (k - 1) * math.exp(-x),
                0,
                np.inf,
                limit=200,
            )
            total += prob * val

        dens, _ = integrate.quad(
            lambda x: math.log1p(rho * x) * opt_power_pdf_exact(x, model),
            0,
            np.inf,
            limit=200,
        )
        assert total == pytest.approx(model.prob_any() * dens, abs=1e-8)


class TestMonotoneInRho:
    def test_all_quantities(self):
        model = SparseModel.from_occupancy(1.9, 121, 1.0)
        rhos = np.logspace(-2, 1, 15)
        for fn in (se_lower, se_upper_rayleigh):
            vals = [fn(model, float(r)) for r in rhos]
            assert all(b > a for a, b in zip(vals, vals[1:]))
        vals = [se_sparse_approx(1.9, float(r)) for r in rhos]
        assert all(b > a for a, b in zip(vals, vals[1:]))
