"""Luminance-weighted neighborhood filter.

The filter response at pixel r is

    response(r) = U(r) - sum_{s in N(r)} w_rs * U(s)

where N(r) is the (2*radius+1)^2 window around r (borders truncated, r itself
excluded) and the weights w_rs are computed from the luminance plane Y and
normalized to sum to 1. Constant planes are therefore in the null space of
the filter, and every row of the filter matrix sums to zero.

Two weightings are provided:

* ``gaussian``:     raw_s = exp(-(Y(r) - Y(s))^2 / (2 * var_r))
* ``correlation``:  raw_s = max(eps, 1 + (Y(r) - mu_r) * (Y(s) - mu_r) / var_r)

with mu_r / var_r the mean and population variance of Y over N(r) plus r
itself, and var_r floored at ``sigma_floor`` so flat windows do not divide
by zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from .errors import (
    DegenerateImageError,
    DegenerateNeighborhoodError,
    DimensionMismatchError,
)

WEIGHT_KINDS = ("gaussian", "correlation")

# raw correlation weights are floored here so normalized weights stay in (0, 1]
_EPS_POS = 1e-6


@dataclass(frozen=True)
class FilterConfig:
    window_radius: int = 1
    weight_kind: str = "gaussian"
    sigma_floor: float = 1e-4

    def __post_init__(self):
        if self.window_radius < 1:
            raise ValueError("window_radius must be >= 1")
        if self.weight_kind not in WEIGHT_KINDS:
            raise ValueError(f"weight_kind must be one of {WEIGHT_KINDS}")
        if self.sigma_floor <= 0:
            raise ValueError("sigma_floor must be positive")


def neighborhood(r: int, width: int, height: int, radius: int = 1) -> list[int]:
    """In-bounds window indices around pixel ``r``, excluding ``r`` itself.

    Chebyshev-distance window; borders truncate (no padding or wraparound).
    Returned indices are ascending.
    """
    n = width * height
    if not 0 <= r < n:
        raise IndexError(f"pixel index {r} out of range for {width}x{height}")
    ry, rx = divmod(r, width)
    out = []
    for yy in range(max(0, ry - radius), min(height, ry + radius + 1)):
        for xx in range(max(0, rx - radius), min(width, rx + radius + 1)):
            if yy == ry and xx == rx:
                continue
            out.append(yy * width + xx)
    return out


def _offsets(radius: int) -> list[tuple[int, int]]:
    return [
        (dy, dx)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if (dy, dx) != (0, 0)
    ]


def _window_sums(a: np.ndarray, radius: int):
    """Per-pixel sum of `a` over the truncated window (center included)."""
    h, w = a.shape
    c = np.zeros((h + 1, w + 1))
    np.cumsum(np.cumsum(a, axis=0), axis=1, out=c[1:, 1:])
    y0 = np.clip(np.arange(h) - radius, 0, h)
    y1 = np.clip(np.arange(h) + radius + 1, 0, h)
    x0 = np.clip(np.arange(w) - radius, 0, w)
    x1 = np.clip(np.arange(w) + radius + 1, 0, w)
    return (
        c[np.ix_(y1, x1)] - c[np.ix_(y0, x1)] - c[np.ix_(y1, x0)] + c[np.ix_(y0, x0)]
    )


def _window_stats(y: np.ndarray, radius: int):
    """Window pixel count, mean and population variance at every pixel."""
    h, w = y.shape
    ny = np.minimum(np.arange(h) + radius + 1, h) - np.maximum(np.arange(h) - radius, 0)
    nx = np.minimum(np.arange(w) + radius + 1, w) - np.maximum(np.arange(w) - radius, 0)
    count = ny[:, None] * nx[None, :]
    s1 = _window_sums(y, radius)
    s2 = _window_sums(y * y, radius)
    mean = s1 / count
    var = np.maximum(s2 / count - mean * mean, 0.0)
    return count, mean, var


def _normalized_weights(y: np.ndarray, cfg: FilterConfig):
    """Normalized weight field for every window offset.

    Returns a list of (dy, dx, weights) where ``weights`` is an (h, w) array
    holding w_rs for the neighbor s = r + (dy, dx); zero where s is out of
    bounds. Weights over all offsets sum to 1 at every pixel. Shared by
    :func:`apply_filter` and :func:`build_filter_matrix`.
    """
    h, w = y.shape
    if h * w < 2:
        raise DegenerateImageError("image must have at least 2 pixels")
    _, mean, var = _window_stats(y, cfg.window_radius)
    var = np.maximum(var, cfg.sigma_floor)

    raws = []
    total = np.zeros((h, w))
    for dy, dx in _offsets(cfg.window_radius):
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        ysn = slice(max(0, dy), h + min(0, dy))
        xsn = slice(max(0, dx), w + min(0, dx))
        raw = np.zeros((h, w))
        yc, yn = y[ys, xs], y[ysn, xsn]
        if cfg.weight_kind == "gaussian":
            d = yc - yn
            raw[ys, xs] = np.exp(-(d * d) / (2.0 * var[ys, xs]))
        else:
            raw[ys, xs] = np.maximum(
                _EPS_POS, 1.0 + (yc - mean[ys, xs]) * (yn - mean[ys, xs]) / var[ys, xs]
            )
        total += raw
        raws.append((dy, dx, raw))
    return [(dy, dx, np.where(raw > 0, raw / total, 0.0)) for dy, dx, raw in raws]


def affinity_weights(y: np.ndarray, r: int, cfg: FilterConfig) -> dict[int, float]:
    """Weights w_rs for one pixel, keyed by neighbor index; they sum to 1.

    Straightforward single-pixel evaluation; the tests use it as the
    reference for the vectorized field in :func:`_normalized_weights`.
    """
    h, w = y.shape
    neigh = neighborhood(r, w, h, cfg.window_radius)
    if not neigh:
        raise DegenerateNeighborhoodError("pixel has no neighbors")
    flat = y.ravel()
    window = np.append(flat[neigh], flat[r])
    var = max(window.var(), cfg.sigma_floor)
    if cfg.weight_kind == "gaussian":
        raw = np.exp(-((flat[r] - flat[neigh]) ** 2) / (2.0 * var))
    else:
        mu = window.mean()
        raw = np.maximum(_EPS_POS, 1.0 + (flat[r] - mu) * (flat[neigh] - mu) / var)
    wts = raw / raw.sum()
    return dict(zip(neigh, wts))


def apply_filter(y: np.ndarray, u: np.ndarray, cfg: FilterConfig) -> np.ndarray:
    """Filter response plane: U minus the weighted neighbor average."""
    if y.shape != u.shape:
        raise DimensionMismatchError(f"shapes differ: {y.shape} vs {u.shape}")
    h, w = y.shape
    resp = u.astype(np.float64).copy()
    for dy, dx, wts in _normalized_weights(y, cfg):
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        ysn = slice(max(0, dy), h + min(0, dy))
        xsn = slice(max(0, dx), w + min(0, dx))
        resp[ys, xs] -= wts[ys, xs] * u[ysn, xsn]
    return resp


def build_filter_matrix(y: np.ndarray, cfg: FilterConfig) -> sp.csr_matrix:
    """Sparse filter operator: row i is the filter of pixel i.

    Square CSR of order h*w with 1 on the diagonal and -w_is on neighbor
    columns; every row sums to zero.
    """
    h, w = y.shape
    n = h * w
    if n < 2:
        raise DegenerateImageError("image must have at least 2 pixels")
    idx = np.arange(n).reshape(h, w)
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.ones(n)]
    for dy, dx, wts in _normalized_weights(y, cfg):
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        ysn = slice(max(0, dy), h + min(0, dy))
        xsn = slice(max(0, dx), w + min(0, dx))
        rows.append(idx[ys, xs].ravel())
        cols.append(idx[ysn, xsn].ravel())
        vals.append(-wts[ys, xs].ravel())
    m = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    m.sort_indices()
    return m


def dump_matrix_market(m: sp.spmatrix, path) -> None:
    """Debug dump in MatrixMarket coordinate text format."""
    scipy.io.mmwrite(path, sp.coo_matrix(m))
