import csv

import numpy as np
import pytest

from l1color import colorspace as cs
from l1color.affinity import FilterConfig
from l1color.errors import DegenerateImageError, DegenerateSamplesError, NonFiniteError
from l1color.ggd import (
    GGDFit,
    collect_responses,
    export_log_histogram,
    fit_ggd,
    histogram,
    moment_ratio,
)

from oracles import ggd_mean_abs, sample_gaussian, sample_ggd_gamma, sample_laplacian


class TestMomentRatio:
    def test_known_values(self):
        # Gamma(1/2)Gamma(3/2)/Gamma(1)^2 = pi/2 at alpha=2;
        # Gamma(1)Gamma(3)/Gamma(2)^2 = 2 at alpha=1
        assert moment_ratio(2.0) == pytest.approx(np.pi / 2, rel=1e-12)
        assert moment_ratio(1.0) == pytest.approx(2.0, rel=1e-12)
        # Gamma(2)Gamma(6)/Gamma(4)^2 = 120/36
        assert moment_ratio(0.5) == pytest.approx(10.0 / 3.0, rel=1e-10)

    def test_strictly_decreasing_on_grid(self):
        grid = np.linspace(0.05, 4.0, 200)
        vals = [moment_ratio(a) for a in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestFit:
    def test_gaussian_samples(self):
        rng = np.random.default_rng(101)
        fit = fit_ggd(sample_gaussian(rng, 100_000))
        assert fit.alpha == pytest.approx(2.0, abs=0.1)

    def test_laplacian_samples(self):
        rng = np.random.default_rng(102)
        fit = fit_ggd(sample_laplacian(rng, 100_000, b=0.5))
        assert fit.alpha == pytest.approx(1.0, abs=0.07)
        assert fit.scale == pytest.approx(0.5, rel=0.1)

    def test_heavy_tailed_ggd_samples(self):
        rng = np.random.default_rng(103)
        samples = sample_ggd_gamma(rng, 100_000, alpha=0.8, s=0.1)
        # sampler sanity: empirical E|x| agrees with the closed form
        assert np.abs(samples).mean() == pytest.approx(
            ggd_mean_abs(0.8, 0.1), rel=0.02
        )
        fit = fit_ggd(samples)
        assert fit.alpha == pytest.approx(0.8, abs=0.05)
        assert fit.scale == pytest.approx(0.1, rel=0.10)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(104)
        samples = sample_ggd_gamma(rng, 20_000, alpha=1.3, s=0.7)
        f1 = fit_ggd(samples)
        f2 = fit_ggd(250.0 * samples)
        assert f2.alpha == pytest.approx(f1.alpha, abs=1e-6)
        assert f2.scale == pytest.approx(250.0 * f1.scale, rel=1e-9)

    def test_log_likelihood_prefers_true_shape(self):
        rng = np.random.default_rng(105)
        samples = sample_laplacian(rng, 50_000)
        fit = fit_ggd(samples)
        # likelihood at the fitted parameters beats a deliberately wrong shape
        wrong = GGDFit(3.5, fit.scale, 0.0, fit.n_samples)
        ll_wrong = np.sum(wrong.log_density(samples))
        assert fit.log_likelihood > ll_wrong

    def test_too_few_samples(self):
        with pytest.raises(DegenerateSamplesError):
            fit_ggd(np.arange(99, dtype=float))

    def test_all_identical(self):
        with pytest.raises(DegenerateSamplesError):
            fit_ggd(np.full(500, 0.3))

    def test_all_subthreshold(self):
        rng = np.random.default_rng(106)
        with pytest.raises(DegenerateSamplesError):
            fit_ggd(1e-15 * rng.random(500))

    def test_zeros_are_kept_when_not_all_zero(self):
        rng = np.random.default_rng(107)
        samples = np.concatenate([np.zeros(5000), sample_gaussian(rng, 5000)])
        fit = fit_ggd(samples)
        assert fit.n_samples == 10_000
        # half the mass at zero drags the fitted shape well below Gaussian
        assert fit.alpha < 1.5

    def test_non_finite(self):
        with pytest.raises(NonFiniteError):
            fit_ggd(np.array([np.inf] + [0.1] * 200))


class TestCollectResponses:
    def test_constant_chroma_all_zero(self):
        y = np.random.default_rng(108).random((6, 6))
        img = cs.YUVImage(y, np.full((6, 6), 0.2), np.full((6, 6), -0.1))
        samples = collect_responses(img, FilterConfig())
        assert samples.shape == (72,)
        assert np.abs(samples).max() < 1e-12

    def test_sample_count(self, two_region):
        samples = collect_responses(two_region, FilterConfig())
        assert samples.size == 2 * two_region.width * two_region.height

    def test_degenerate_image(self):
        img = cs.YUVImage(np.zeros((1, 3)), np.zeros((1, 3)), np.zeros((1, 3)))
        with pytest.raises(DegenerateImageError):
            collect_responses(img, FilterConfig())

    def test_natural_photo_is_leptokurtic(self, photo_paths):
        img = cs.rgb_to_yuv(cs.load_image(photo_paths[0]))
        samples = collect_responses(img, FilterConfig())
        mu = samples.mean()
        sig2 = samples.var()
        kurt = np.mean((samples - mu) ** 4) / sig2**2 - 3.0
        assert kurt > 0.0  # sharp zero peak, heavy tails


class TestHistogramExport:
    def test_basic_columns(self, tmp_path):
        h = histogram(np.array([0.0, 0.1, 0.1, 0.9]), bins=4, value_range=(0, 1))
        path = tmp_path / "h.csv"
        export_log_histogram(h, path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["bin_center", "count", "log_count"]
        counts = [int(r[1]) for r in rows[1:]]
        assert sum(counts) == h.total == 4
        # empty bin logs to 0
        empty = [r for r in rows[1:] if int(r[1]) == 0]
        assert all(float(r[2]) == 0.0 for r in empty)

    def test_overlay_columns_on_natural_photo(self, tmp_path, photo_paths):
        img = cs.rgb_to_yuv(cs.load_image(photo_paths[0]))
        samples = collect_responses(img, FilterConfig())
        fit = fit_ggd(samples)
        h = histogram(samples, bins=101)
        path = tmp_path / "overlay.csv"
        export_log_histogram(h, path, fit=fit)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["bin_center", "count", "log_count", "ggd_fit", "gaussian_fit"]
        ggd = np.array([float(r[3]) for r in rows[1:]])
        gauss = np.array([float(r[4]) for r in rows[1:]])
        n_bins = ggd.size
        k = max(1, round(0.05 * n_bins))
        outer = np.r_[0:k, n_bins - k : n_bins]
        assert np.all(ggd[outer] > gauss[outer])

    def test_histogram_invariants(self):
        with pytest.raises(ValueError):
            histogram(np.array([1.0, 2.0]), bins=3).__class__(
                bin_edges=np.array([0.0, 1.0, 0.5]),
                counts=np.array([1, 1]),
                total=2,
            )
