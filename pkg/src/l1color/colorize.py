"""Scribble-constrained chroma propagation.

Given a gray plane Y and scribble sites carrying chroma values, both methods
spread color by making the luminance-weighted filter response small:

* ``l1``: minimize  sum_i |(F U)_i| + lambda * sum_{i in S} |U(i) - U_o(i)|
  as a linear program. The residual is split into slack pairs (nu, mu) with
  ``F U + nu - mu = b`` and all variables nonnegative; chroma enters shifted
  by +0.5 so the variable vector stays in the positive orthant. With exact
  scribbles the constrained entries are eliminated by substitution instead of
  penalized.
* ``l2``: minimize  sum_i (F U)_i^2  with the scribbled entries held fixed
  (the classical quadratic propagation); conjugate gradient on the normal
  equations restricted to the free pixels.

Chroma planes U and V are solved independently with the same machinery.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .affinity import FilterConfig, build_filter_matrix
from .colorspace import YUVImage
from .errors import (
    CountTooLargeError,
    DimensionMismatchError,
    EmptyScribblesError,
    SolverFailedError,
)
from .lp import DEFAULT_MAX_ITER, DEFAULT_TOL, LPProblem, solve_lp

CHROMA_SHIFT = 0.5
METHODS = ("l1", "l2")
PATTERNS = ("uniform-random", "grid")


@dataclass
class ScribbleSet:
    """Sparse pixel sites with prescribed (u, v) chroma."""

    sites: list[tuple[int, float, float]]
    exact: bool = True

    def __post_init__(self):
        if not self.sites:
            raise EmptyScribblesError("scribble set has no sites")
        self.sites = [(int(i), float(u), float(v)) for i, u, v in self.sites]
        indices = [i for i, _, _ in self.sites]
        if len(set(indices)) != len(indices):
            raise ValueError("scribble pixel indices must be unique")
        for i, u, v in self.sites:
            if i < 0:
                raise IndexError(f"negative pixel index {i}")
            if not (-0.5 <= u <= 0.5 and -0.5 <= v <= 0.5):
                raise ValueError(f"chroma at pixel {i} outside [-0.5, 0.5]")

    def validate_bounds(self, width: int, height: int) -> None:
        n = width * height
        for i, _, _ in self.sites:
            if i >= n:
                raise IndexError(f"pixel index {i} out of range for {width}x{height}")

    def channel(self, which: str) -> list[tuple[int, float]]:
        pos = 1 if which == "u" else 2
        return [(site[0], site[pos]) for site in self.sites]


@dataclass
class ColorizeParams:
    method: str = "l1"
    lam: float = 100.0
    filter: FilterConfig = field(default_factory=FilterConfig)
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")


@dataclass
class ColorizeResult:
    u: np.ndarray
    v: np.ndarray
    objective_u: float
    objective_v: float
    method: str
    wall_time: float
    iterations_u: int
    iterations_v: int


def scribbles_to_json(s: ScribbleSet, width: int) -> str:
    sites = [
        {"x": int(i % width), "y": int(i // width), "u": u, "v": v}
        for i, u, v in s.sites
    ]
    return json.dumps({"exact": s.exact, "sites": sites}, indent=1)


def scribbles_from_json(data, width: int, height: int) -> ScribbleSet:
    """Parse {"exact": bool, "sites": [{"x", "y", "u", "v"}, ...]}."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    sites = []
    for site in data.get("sites", []):
        x, y = int(site["x"]), int(site["y"])
        if not (0 <= x < width and 0 <= y < height):
            raise IndexError(f"site ({x}, {y}) outside {width}x{height}")
        sites.append((y * width + x, float(site["u"]), float(site["v"])))
    s = ScribbleSet(sites, exact=bool(data.get("exact", True)))
    s.validate_bounds(width, height)
    return s


def assemble_l1_problem(
    F: sp.csr_matrix,
    sites: list[tuple[int, float]],
    lam: float,
    n_pixels: int,
    exact: bool = False,
) -> LPProblem:
    """Stack the filter rows and scribble terms into a standard-form LP.

    Penalty mode residual: rows [F ; lam * E_S], rhs [0 ; lam * (U_o + 0.5)].
    Exact mode eliminates scribbled columns into the rhs and drops the
    penalty block. Variables are (shifted chroma, nu, mu) with objective
    sum(nu + mu).
    """
    if F.shape != (n_pixels, n_pixels):
        raise DimensionMismatchError(f"filter matrix is {F.shape}, expected square of {n_pixels}")
    if not sites:
        raise EmptyScribblesError("no scribble sites for this channel")
    s_idx = np.array([i for i, _ in sites], dtype=np.int64)
    s_val = np.array([val for _, val in sites], dtype=np.float64)
    if s_idx.min() < 0 or s_idx.max() >= n_pixels:
        raise IndexError("scribble index out of bounds")

    if exact:
        free = np.setdiff1d(np.arange(n_pixels), s_idx)
        b = -F[:, s_idx] @ (s_val + CHROMA_SHIFT)
        eye = sp.identity(n_pixels, format="csr")
        A = sp.hstack([F[:, free], eye, -eye], format="csr")
        c = np.concatenate([np.zeros(free.size), np.ones(2 * n_pixels)])
        return LPProblem(A, b, c)

    k = s_idx.size
    selector = sp.csr_matrix(
        (np.full(k, lam), (np.arange(k), s_idx)), shape=(k, n_pixels)
    )
    stacked = sp.vstack([F, selector], format="csr")
    m = n_pixels + k
    # top block of b is F @ (0.5 * ones) = 0 by the zero row sums
    b = np.concatenate([np.zeros(n_pixels), lam * (s_val + CHROMA_SHIFT)])
    eye = sp.identity(m, format="csr")
    A = sp.hstack([stacked, eye, -eye], format="csr")
    c = np.concatenate([np.zeros(n_pixels), np.ones(2 * m)])
    return LPProblem(A, b, c)


def j1_objective(
    F: sp.csr_matrix, u: np.ndarray, sites: list[tuple[int, float]], lam: float
) -> float:
    """The L1 cost: filter-response term plus lambda-weighted scribble misfit."""
    flat = np.asarray(u, dtype=np.float64).ravel()
    if F.shape[1] != flat.size:
        raise DimensionMismatchError(f"plane has {flat.size} pixels, filter expects {F.shape[1]}")
    total = float(np.abs(F @ flat).sum())
    for i, val in sites:
        total += lam * abs(flat[i] - val)
    return total


def _solve_l1_channel(F, sites, lam, n_pixels, exact, tol, max_iter):
    problem = assemble_l1_problem(F, sites, lam, n_pixels, exact=exact)
    sol = solve_lp(problem, tol=tol, max_iter=max_iter)
    if sol.status != "optimal":
        raise SolverFailedError(f"LP ended with status {sol.status}", status=sol.status)
    flat = np.empty(n_pixels)
    if exact:
        s_idx = np.array([i for i, _ in sites], dtype=np.int64)
        free = np.setdiff1d(np.arange(n_pixels), s_idx)
        flat[free] = sol.x[: free.size] - CHROMA_SHIFT
        flat[s_idx] = [val for _, val in sites]
    else:
        flat = sol.x[:n_pixels] - CHROMA_SHIFT
    return flat, sol.iterations


def _solve_l2_channel(F, sites, n_pixels, tol):
    s_idx = np.array([i for i, _ in sites], dtype=np.int64)
    s_val = np.array([val for _, val in sites], dtype=np.float64)
    free = np.setdiff1d(np.arange(n_pixels), s_idx)
    flat = np.empty(n_pixels)
    flat[s_idx] = s_val
    if free.size == 0:
        return flat, 0
    Ff = F[:, free].tocsr()
    rhs = -(Ff.T @ (F[:, s_idx] @ s_val))
    B = (Ff.T @ Ff).tocsr()
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    x, info = spla.cg(B, rhs, rtol=tol, atol=0.0, maxiter=20 * n_pixels, callback=count)
    if info != 0:
        raise SolverFailedError(f"CG did not converge (info={info})", status="cg-failed")
    flat[free] = x
    return flat, iterations


def colorize(y: np.ndarray, scribbles: ScribbleSet, params: ColorizeParams) -> ColorizeResult:
    """Propagate scribble chroma over the whole plane.

    The U and V channels are independent and solved concurrently. Objectives
    are reported as the L1 cost for both methods so they are comparable.
    """
    y = np.asarray(y, dtype=np.float64)
    h, w = y.shape
    n = h * w
    scribbles.validate_bounds(w, h)
    start = time.perf_counter()
    F = build_filter_matrix(y, params.filter)

    def solve_channel(which: str):
        sites = scribbles.channel(which)
        if len(sites) == n:
            flat = np.empty(n)
            flat[[i for i, _ in sites]] = [val for _, val in sites]
            return flat, 0
        if params.method == "l1":
            return _solve_l1_channel(
                F, sites, params.lam, n, scribbles.exact, params.tol, params.max_iter
            )
        # the quadratic baseline always pins scribbles exactly
        return _solve_l2_channel(F, sites, n, min(params.tol, 1e-8))

    with ThreadPoolExecutor(max_workers=2) as pool:
        fut_u = pool.submit(solve_channel, "u")
        fut_v = pool.submit(solve_channel, "v")
        flat_u, iters_u = fut_u.result()
        flat_v, iters_v = fut_v.result()

    obj_u = j1_objective(F, flat_u, scribbles.channel("u"), params.lam)
    obj_v = j1_objective(F, flat_v, scribbles.channel("v"), params.lam)
    plane_u = np.clip(flat_u.reshape(h, w), -0.5, 0.5)
    plane_v = np.clip(flat_v.reshape(h, w), -0.5, 0.5)
    return ColorizeResult(
        u=plane_u,
        v=plane_v,
        objective_u=obj_u,
        objective_v=obj_v,
        method=params.method,
        wall_time=time.perf_counter() - start,
        iterations_u=iters_u,
        iterations_v=iters_v,
    )


def evaluate(result: ColorizeResult, reference: YUVImage) -> dict[str, float]:
    """Chroma error metrics against a known-color reference."""
    if result.u.shape != (reference.height, reference.width):
        raise DimensionMismatchError("result and reference dimensions differ")

    def channel_metrics(got, ref):
        err = got - ref
        mae = float(np.abs(err).mean())
        mse = float((err * err).mean())
        psnr = float("inf") if mse == 0 else float(10 * np.log10(1.0 / mse))
        return mae, float(np.sqrt(mse)), psnr, mse

    mae_u, rmse_u, psnr_u, mse_u = channel_metrics(result.u, reference.u)
    mae_v, rmse_v, psnr_v, mse_v = channel_metrics(result.v, reference.v)
    pooled = 0.5 * (mse_u + mse_v)
    psnr = float("inf") if pooled == 0 else float(10 * np.log10(1.0 / pooled))
    return {
        "mae_u": mae_u,
        "mae_v": mae_v,
        "rmse_u": rmse_u,
        "rmse_v": rmse_v,
        "psnr_u": psnr_u,
        "psnr_v": psnr_v,
        "psnr": psnr,
    }


def sample_scribbles(
    original: YUVImage,
    count: int,
    seed: int = 0,
    pattern: str = "uniform-random",
    exact: bool = True,
) -> ScribbleSet:
    """Pick sites on the original image and copy its chroma there.

    This is how ground-truth experiments mark a gray image: the original
    color channels supply the scribble values.
    """
    n = original.width * original.height
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > n:
        raise CountTooLargeError(f"count {count} exceeds {n} pixels")
    if pattern not in PATTERNS:
        raise ValueError(f"pattern must be one of {PATTERNS}")
    if pattern == "uniform-random":
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(n, size=count, replace=False))
    else:
        w, h = original.width, original.height
        g_cols = min(w, int(np.ceil(np.sqrt(count * w / h))))
        g_rows = int(np.ceil(count / g_cols))
        xs = (np.floor((np.arange(g_cols) + 0.5) * w / g_cols)).astype(np.int64)
        ys = (np.floor((np.arange(g_rows) + 0.5) * h / g_rows)).astype(np.int64)
        idx = (ys[:, None] * w + xs[None, :]).ravel()[:count]
    flat_u = original.u.ravel()
    flat_v = original.v.ravel()
    sites = [(int(i), float(flat_u[i]), float(flat_v[i])) for i in idx]
    return ScribbleSet(sites, exact=exact)
