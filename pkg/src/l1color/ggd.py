"""Generalized Gaussian statistics of filter responses.

The density fitted here is

    J(x) = (1/Z) * exp(-|x/s|^alpha),   Z = 2 * s * Gamma(1 + 1/alpha)

``alpha`` is the shape (2 = Gaussian, 1 = Laplacian, < 1 heavy-tailed) and
``s`` the scale. Fitting is by moment matching: the ratio

    E[x^2] / E[|x|]^2 = Gamma(1/a) * Gamma(3/a) / Gamma(2/a)^2

is strictly decreasing in a, so the empirical ratio pins alpha down by
bisection, after which E[|x|] = s * Gamma(2/a) / Gamma(1/a) gives the scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .affinity import FilterConfig, apply_filter
from .colorspace import YUVImage
from .errors import DegenerateImageError, DegenerateSamplesError, NonFiniteError

ALPHA_LO = 0.05
ALPHA_HI = 4.0
_ZERO_THRESHOLD = 1e-12
MIN_SAMPLES = 100


@dataclass(frozen=True)
class GGDFit:
    alpha: float
    scale: float
    log_likelihood: float
    n_samples: int

    def __post_init__(self):
        if not (self.alpha > 0 and self.scale > 0):
            raise ValueError("alpha and scale must be positive")
        if self.n_samples < MIN_SAMPLES:
            raise ValueError(f"fit needs at least {MIN_SAMPLES} samples")

    def log_density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        log_z = np.log(2 * self.scale) + gammaln(1.0 + 1.0 / self.alpha)
        return -np.abs(x / self.scale) ** self.alpha - log_z

    def density(self, x) -> np.ndarray:
        return np.exp(self.log_density(x))

    def second_moment(self) -> float:
        """E[x^2] implied by (alpha, scale)."""
        a = self.alpha
        return self.scale**2 * np.exp(gammaln(3.0 / a) - gammaln(1.0 / a))


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        counts = np.asarray(self.counts)
        if edges.ndim != 1 or np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if counts.shape != (edges.size - 1,) or np.any(counts < 0):
            raise ValueError("counts must align with edges and be nonnegative")
        if int(counts.sum()) != self.total:
            raise ValueError("counts must sum to total")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts.astype(np.int64))

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def histogram(samples, bins: int = 101, value_range=None) -> Histogram:
    samples = np.asarray(samples, dtype=np.float64)
    counts, edges = np.histogram(samples, bins=bins, range=value_range)
    return Histogram(edges, counts, int(counts.sum()))


def collect_responses(img: YUVImage, cfg: FilterConfig) -> np.ndarray:
    """Filter responses of both chroma planes, pooled into one sample vector."""
    if img.width < 2 or img.height < 2:
        raise DegenerateImageError("image must be at least 2x2")
    ru = apply_filter(img.y, img.u, cfg)
    rv = apply_filter(img.y, img.v, cfg)
    return np.concatenate([ru.ravel(), rv.ravel()])


def moment_ratio(alpha: float) -> float:
    """Gamma(1/a) * Gamma(3/a) / Gamma(2/a)^2, strictly decreasing in a."""
    inv = 1.0 / alpha
    return float(np.exp(gammaln(inv) + gammaln(3 * inv) - 2 * gammaln(2 * inv)))


def fit_ggd(samples) -> GGDFit:
    """Moment-matching GGD fit; alpha by bisection on [0.05, 4]."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < MIN_SAMPLES:
        raise DegenerateSamplesError(f"need at least {MIN_SAMPLES} samples, got {x.size}")
    if not np.isfinite(x).all():
        raise NonFiniteError("samples contain NaN or infinity")
    if np.all(x == x[0]):
        raise DegenerateSamplesError("all samples identical")
    abs_x = np.abs(x)
    if np.all(abs_x < _ZERO_THRESHOLD):
        raise DegenerateSamplesError("all samples below the zero threshold")

    mean_abs = abs_x.mean()
    mean_sq = np.mean(x * x)
    target = mean_sq / (mean_abs * mean_abs)

    lo, hi = ALPHA_LO, ALPHA_HI
    if target >= moment_ratio(lo):
        alpha = lo
    elif target <= moment_ratio(hi):
        alpha = hi
    else:
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if moment_ratio(mid) > target:
                lo = mid
            else:
                hi = mid
        alpha = 0.5 * (lo + hi)

    scale = mean_abs * np.exp(gammaln(1.0 / alpha) - gammaln(2.0 / alpha))
    log_z = np.log(2 * scale) + gammaln(1.0 + 1.0 / alpha)
    log_likelihood = float(-np.sum((abs_x / scale) ** alpha) - x.size * log_z)
    return GGDFit(float(alpha), float(scale), log_likelihood, int(x.size))


def export_log_histogram(h: Histogram, path, fit: GGDFit | None = None) -> None:
    """Write the histogram as CSV: bin_center, count, log_count[, ggd_fit, gaussian_fit].

    log_count is log10(count + 1). When a fit is supplied, the last two
    columns hold the expected counts under the fitted GGD and under the
    Gaussian with the same second moment — the overlay pair that makes the
    tail difference visible on a log axis.
    """
    centers = h.bin_centers
    widths = np.diff(h.bin_edges)
    rows = [centers, h.counts, np.log10(h.counts + 1.0)]
    header = ["bin_center", "count", "log_count"]
    if fit is not None:
        sigma = np.sqrt(fit.second_moment())
        gauss = np.exp(-0.5 * (centers / sigma) ** 2) / (sigma * np.sqrt(2 * np.pi))
        rows.append(h.total * widths * fit.density(centers))
        rows.append(h.total * widths * gauss)
        header += ["ggd_fit", "gaussian_fit"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(centers.size):
            writer.writerow([repr(float(col[i])) if j != 1 else int(col[i])
                             for j, col in enumerate(rows)])
