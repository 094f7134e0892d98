import numpy as np
import pytest

from kronphase.estimators import (
    SpacingHistogram,
    estimate_pair_correlation,
    nearest_neighbor_spacings,
    spacing_histogram_from_gaps,
)
from kronphase.gof import (
    KS_COEFF_05,
    chi_square_uniformity,
    compare_to_curve,
    ks_against_exponential,
)
from kronphase.processes import RescaledConfig

TWO_PI = 2.0 * np.pi


def poisson_samples(circumference, n, seed):
    gen = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(n):
        k = gen.poisson(circumference)
        pts = gen.uniform(-circumference / 2, circumference / 2, k)
        out.append(RescaledConfig(points=pts, circumference=circumference))
    return out


class TestCompareToCurve:
    def test_flat_target_on_poisson(self):
        h = estimate_pair_correlation(poisson_samples(40.0, 300, seed=1), 4.0, 20)
        cmp = compare_to_curve(h, lambda d: 1.0)
        assert cmp.rms_dev < 0.05
        assert cmp.max_abs_dev >= cmp.rms_dev
        assert cmp.per_bin_z.shape == (20,)
        assert cmp.n_bins_over_4sigma == 0

    def test_exact_match_gives_zero(self):
        h = estimate_pair_correlation(poisson_samples(40.0, 50, seed=2), 4.0, 10)
        est = h.estimate.copy()
        mids = h.bin_midpoints()
        cmp = compare_to_curve(h, lambda d: est[np.argmin(np.abs(mids - d))])
        assert cmp.max_abs_dev == 0.0
        assert cmp.rms_dev == 0.0
        assert cmp.n_bins_over_4sigma == 0

    def test_offset_target_flags_bins(self):
        h = estimate_pair_correlation(poisson_samples(40.0, 300, seed=3), 4.0, 10)
        cmp = compare_to_curve(h, lambda d: 5.0)
        assert cmp.n_bins_over_4sigma == 10
        assert np.all(cmp.per_bin_z < -4)

    def test_rejects_single_batch(self):
        h = estimate_pair_correlation(poisson_samples(40.0, 1, seed=4), 4.0, 10)
        with pytest.raises(ValueError):
            compare_to_curve(h, lambda d: 1.0)


class TestKsExponential:
    def test_poisson_spacings_pass(self):
        sh = nearest_neighbor_spacings(poisson_samples(50.0, 200, seed=5))
        res = ks_against_exponential(sh)
        assert res.n == sh.n_spacings
        assert res.threshold_05 == pytest.approx(KS_COEFF_05 / np.sqrt(res.n))
        assert res.passed
        assert res.d_statistic < res.threshold_05

    def test_exact_exponential_quantiles_pass(self):
        # deterministic in-distribution input: exponential quantiles
        n = 500
        u = (np.arange(n) + 0.5) / n
        s = -np.log(1.0 - u)
        sh = spacing_histogram_from_gaps([s], n_bins=20)
        res = ks_against_exponential(sh)
        assert res.passed

    def test_lattice_fails_hard(self):
        sh = spacing_histogram_from_gaps([np.ones(400)], n_bins=10)
        res = ks_against_exponential(sh)
        assert not res.passed
        assert res.d_statistic > 0.5

    def test_min_sample_size(self):
        sh = spacing_histogram_from_gaps([np.linspace(0.1, 2.0, 99)], n_bins=5)
        with pytest.raises(ValueError):
            ks_against_exponential(sh)

    def test_requires_normalized(self):
        sh = SpacingHistogram(
            bin_edges=np.linspace(0, 2, 6),
            counts=np.ones(5),
            n_spacings=5,
            normalized=False,
            spacings=np.linspace(0.1, 1.9, 5),
        )
        with pytest.raises(ValueError):
            ks_against_exponential(sh)

    def test_permutation_invariant(self):
        gen = np.random.Generator(np.random.PCG64(6))
        s = gen.exponential(size=300)
        a = spacing_histogram_from_gaps([s], n_bins=10)
        b = spacing_histogram_from_gaps([s[::-1].copy()], n_bins=10)
        assert ks_against_exponential(a) == ks_against_exponential(b)


class TestChiSquareUniformity:
    def test_uniform_passes(self):
        gen = np.random.Generator(np.random.PCG64(7))
        stat, dof = chi_square_uniformity(gen.uniform(0, TWO_PI, 20_000))
        assert dof == 31
        assert stat < 52.191

    def test_concentrated_fails(self):
        phases = np.full(2000, 1.0)
        stat, dof = chi_square_uniformity(phases, n_bins=8)
        assert dof == 7
        assert stat == pytest.approx(2000 * 7, rel=1e-12)

    def test_needs_enough_mass(self):
        with pytest.raises(ValueError):
            chi_square_uniformity(np.linspace(0, 6, 100), n_bins=32)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            chi_square_uniformity(np.linspace(-1.0, 5.0, 400), n_bins=8)
