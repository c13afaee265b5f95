"""Independent reference implementations used only by the test suite.

Nothing here may import from the solver/fitting code paths it is used to
check; samplers are exact constructions, and the LP oracle enumerates basic
feasible solutions by brute force.
"""

from itertools import combinations

import numpy as np
from scipy.special import gammaln


def sample_gaussian(rng, n, sigma=1.0):
    return sigma * rng.standard_normal(n)


def sample_laplacian(rng, n, b=1.0):
    """Inverse-CDF sampling of the Laplacian with scale b."""
    u = rng.random(n) - 0.5
    return -b * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def sample_ggd_rejection(rng, n, alpha, s):
    """Rejection sampling of exp(-|x/s|^alpha)/Z with a Laplacian envelope.

    Valid only for alpha >= 1: the acceptance ratio exp(|x|/b - |x/s|^alpha)
    is unbounded for alpha < 1, where the target's tail is heavier than any
    Laplacian.
    """
    if alpha < 1:
        raise ValueError("Laplacian envelope does not dominate GGD tails for alpha < 1")
    b = s
    if alpha == 1:
        return sample_laplacian(rng, n, b=s)
    # peak of h(t) = t/b - (t/s)^alpha on t >= 0
    t_star = (s**alpha / (alpha * b)) ** (1.0 / (alpha - 1.0))
    h_star = t_star / b - (t_star / s) ** alpha
    out = np.empty(0)
    while out.size < n:
        m = int(1.5 * (n - out.size)) + 16
        x = sample_laplacian(rng, m, b=b)
        log_ratio = np.abs(x) / b - np.abs(x / s) ** alpha - h_star
        keep = np.log(rng.random(m)) < log_ratio
        out = np.concatenate([out, x[keep]])
    return out[:n]


def sample_ggd_gamma(rng, n, alpha, s):
    """Exact GGD sampler: |x/s|^alpha is Gamma(1/alpha, 1) distributed."""
    g = rng.gamma(1.0 / alpha, 1.0, size=n)
    sign = rng.integers(0, 2, size=n) * 2 - 1
    return s * sign * g ** (1.0 / alpha)


def ggd_mean_abs(alpha, s):
    """E|x| = s * Gamma(2/a) / Gamma(1/a)."""
    return s * np.exp(gammaln(2.0 / alpha) - gammaln(1.0 / alpha))


def enumerate_lp_optimum(A, b, c, feas_tol=1e-9):
    """Brute-force LP oracle: best objective over all basic feasible solutions.

    A is dense (m, n) with m <= n; the LP is min c.x s.t. Ax = b, x >= 0.
    Returns (objective, x) of the best vertex, or (None, None) if no basis
    is feasible.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, n = A.shape
    best_obj, best_x = None, None
    for cols in combinations(range(n), m):
        B = A[:, cols]
        try:
            xb = np.linalg.solve(B, b)
        except np.linalg.LinAlgError:
            continue
        if not np.isfinite(xb).all() or np.any(xb < -feas_tol):
            continue
        x = np.zeros(n)
        x[list(cols)] = np.maximum(xb, 0.0)
        if np.linalg.norm(A @ x - b, np.inf) > 1e-7 * (1 + np.abs(b).max()):
            continue
        obj = float(c @ x)
        if best_obj is None or obj < best_obj:
            best_obj, best_x = obj, x
    return best_obj, best_x
