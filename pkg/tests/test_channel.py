"""Channel generation statistics and reproducibility."""

import math

import numpy as np
import pytest
from scipy import stats

from beamsim.channel import (
    FadingModel,
    draw_fading_power,
    draw_path_count,
    per_beam_intensity,
    realize_channel,
    rician_k_to_nakagami_m,
    sample_path_powers,
)
from beamsim.rng import substream


class TestPerBeamIntensity:
    def test_values(self):
        assert per_beam_intensity(1.9, 121) == pytest.approx(1.9 / 121)
        assert per_beam_intensity(1.9, 121) == pytest.approx(0.0157025, abs=1e-7)
        assert per_beam_intensity(3.3, 625) == pytest.approx(0.00528)
        assert per_beam_intensity(2.7, 1) == 2.7

    def test_domain(self):
        with pytest.raises(ValueError):
            per_beam_intensity(0.0, 10)
        with pytest.raises(ValueError):
            per_beam_intensity(1.0, 0)


class TestDrawPathCount:
    def test_mean(self):
        rng = substream(123, 0)
        n = 1_000_000
        draws = rng.poisson(0.5, size=n)  # bulk draw from the same generator family
        assert abs(draws.mean() - 0.5) <= 3.0 * math.sqrt(0.5 / n)
        rng2 = substream(123, 1)
        scalar = np.array([draw_path_count(0.5, rng2) for _ in range(20_000)])
        assert abs(scalar.mean() - 0.5) <= 4.0 * math.sqrt(0.5 / 20_000)

    def test_zero_class(self):
        lam = 0.0157
        rng = substream(7, 0)
        n = 200_000
        zeros = sum(draw_path_count(lam, rng) == 0 for _ in range(n)) / n
        p0 = math.exp(-lam)
        assert abs(zeros - p0) <= 3.0 * math.sqrt(p0 * (1 - p0) / n)

    def test_degenerate_limit(self):
        rng = substream(9, 0)
        assert all(draw_path_count(1e-12, rng) == 0 for _ in range(2000))

    def test_domain(self):
        with pytest.raises(ValueError):
            draw_path_count(0.0, substream(0))


class TestFadingPowers:
    def test_rayleigh_mean(self):
        rng = substream(1, 0)
        w = sample_path_powers(FadingModel.rayleigh(), 1_000_000, rng)
        assert abs(w.mean() - 1.0) <= 3e-3

    def test_nakagami_variance(self):
        m = 3.2
        rng = substream(2, 0)
        w = sample_path_powers(FadingModel.nakagami(m), 1_000_000, rng)
        assert abs(w.mean() - 1.0) <= 3e-3
        # var = 1/m for unit-mean Gamma(m); allow 4 sigma of the variance estimator
        kurt_excess = 6.0 / m
        se_var = math.sqrt((kurt_excess + 2.0) / 1_000_000) / m
        assert abs(w.var() - 1.0 / m) <= 4.0 * se_var

    def test_rician_zero_k_is_rayleigh(self):
        rng = substream(3, 0)
        w = sample_path_powers(FadingModel.rician(0.0), 100_000, rng)
        # KS against the exponential law at significance 0.01
        res = stats.kstest(w, "expon")
        assert res.pvalue > 0.01

    def test_rician_mean_one(self):
        rng = substream(4, 0)
        for k in (0.5, 5.0, 30.0):
            w = sample_path_powers(FadingModel.rician(k), 400_000, rng)
            assert abs(w.mean() - 1.0) <= 4.0 * w.std() / math.sqrt(len(w))

    def test_scalar_draw(self):
        rng = substream(5, 0)
        vals = [draw_fading_power(FadingModel.rayleigh(), rng) for _ in range(100)]
        assert all(v >= 0.0 for v in vals)

    def test_domain(self):
        with pytest.raises(ValueError):
            FadingModel.nakagami(0.3)
        with pytest.raises(ValueError):
            FadingModel.rician(-1.0)


class TestRicianMapping:
    def test_anchors(self):
        assert rician_k_to_nakagami_m(0.0) == pytest.approx(1.0)
        assert rician_k_to_nakagami_m(5.0) == pytest.approx(36.0 / 11.0)

    def test_monotone_and_asymptote(self):
        ks = np.logspace(-2, 3, 60)
        ms = [rician_k_to_nakagami_m(float(k)) for k in ks]
        assert all(b > a for a, b in zip(ms, ms[1:]))
        # m -> K/2 + 3/4 + O(1/K)
        k = 1e4
        assert rician_k_to_nakagami_m(k) == pytest.approx(k / 2 + 0.75, rel=1e-3)

    def test_domain(self):
        with pytest.raises(ValueError):
            rician_k_to_nakagami_m(-0.1)


class TestRealizeChannel:
    def test_structure(self):
        rng = substream(10, 0)
        real = realize_channel(2.0, 1, FadingModel.rayleigh(), rng)
        assert real.num_pairs == 1
        assert real.counts[0] == len(real.per_pair_powers[0])

    def test_single_pair_is_poisson(self):
        rng = substream(11, 0)
        counts = [
            realize_channel(2.0, 1, FadingModel.rayleigh(), rng).counts[0]
            for _ in range(20_000)
        ]
        assert abs(np.mean(counts) - 2.0) <= 4.0 * math.sqrt(2.0 / 20_000)

    def test_total_power_mean(self):
        # E[sum of all normalized path powers] = lambda0
        rng = substream(12, 0)
        lam0 = 1.9
        totals = [
            sum(float(arr.sum()) for arr in realize_channel(lam0, 16, FadingModel.rayleigh(), rng).per_pair_powers)
            for _ in range(20_000)
        ]
        # variance of the compound Poisson total is lam0 * E[w^2] = 2 lam0
        assert abs(np.mean(totals) - lam0) <= 4.0 * math.sqrt(2.0 * lam0 / 20_000)

    def test_all_empty_fraction(self):
        rng = substream(13, 0)
        lam0 = 1.9
        n = 50_000
        empty = sum(
            realize_channel(lam0, 121, FadingModel.rayleigh(), rng).counts.sum() == 0
            for _ in range(n)
        ) / n
        p0 = math.exp(-lam0)
        assert abs(empty - p0) <= 4.0 * math.sqrt(p0 * (1 - p0) / n)

    def test_total_count_superposition(self):
        # Summed over pairs, counts are Poisson(lambda0): chi-square GoF at 0.01
        lam0 = 1.9
        rng = substream(14, 0)
        n = 100_000
        totals = np.array([
            int(realize_channel(lam0, 7, FadingModel.rayleigh(), rng).counts.sum())
            for _ in range(n)
        ])
        kmax = 9
        observed = np.bincount(np.minimum(totals, kmax), minlength=kmax + 1)
        pmf = np.array([stats.poisson.pmf(k, lam0) for k in range(kmax)])
        pmf = np.append(pmf, 1.0 - pmf.sum())
        res = stats.chisquare(observed, n * pmf)
        assert res.pvalue > 0.01

    def test_seed_reproducibility(self):
        a = realize_channel(1.9, 32, FadingModel.nakagami(2.0), substream(99, 4))
        b = realize_channel(1.9, 32, FadingModel.nakagami(2.0), substream(99, 4))
        assert np.array_equal(a.counts, b.counts)
        for x, y in zip(a.per_pair_powers, b.per_pair_powers):
            assert np.array_equal(x, y)
