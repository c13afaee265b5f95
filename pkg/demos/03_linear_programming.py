#!/usr/bin/env python3
"""The LP engine on its own: L1 regression as a slack-pair program.

min sum(nu + mu)  s.t.  A x + nu - mu = b,  all variables >= 0

turns ||Ax - b||_1 minimization into a standard-form LP: at the optimum one
slack of each pair is zero and the other carries |b_i - (Ax)_i|. The same
construction, with A holding filter rows and scribble rows, is what the
colorizer solves.
"""

import numpy as np
import scipy.sparse as sp

from l1color import LPProblem, dump_mps, kkt_residuals, solve_lp

rng = np.random.default_rng(42)

# overdetermined regression with outliers: L1 shrugs them off
n_obs, n_par = 40, 3
X = np.column_stack([np.ones(n_obs), rng.normal(size=(n_obs, n_par - 1))])
truth = np.array([0.5, 2.0, -1.0])
b = X @ truth + 0.05 * rng.normal(size=n_obs)
b[::9] += 5.0  # gross outliers

# variables: (beta+, beta-, nu, mu); beta free via split
eye = sp.identity(n_obs, format="csr")
A = sp.hstack([sp.csr_matrix(X), -sp.csr_matrix(X), eye, -eye], format="csr")
c = np.concatenate([np.zeros(2 * n_par), np.ones(2 * n_obs)])
problem = LPProblem(A, b, c)

solution = solve_lp(problem, tol=1e-8, max_iter=100)
beta = solution.x[:n_par] - solution.x[n_par : 2 * n_par]
ls = np.linalg.lstsq(X, b, rcond=None)[0]

print(f"status={solution.status} after {solution.iterations} iterations")
print(f"true coefficients:   {truth}")
print(f"L1 (LP) estimate:    {np.round(beta, 4)}")
print(f"least-squares:       {np.round(ls, 4)}  <- dragged by the outliers")

primal, dual, gap = kkt_residuals(problem, solution)
print(f"\nindependently recomputed residuals: primal={primal:.2e} "
      f"dual={dual:.2e} complementarity={gap:.2e}")

residuals = b - X @ beta
print(f"L1 residuals at outlier rows: {np.round(residuals[::9], 3)}")
print(f"nonzero slack pairs: {np.sum((solution.x[2 * n_par:2 * n_par + n_obs] > 1e-6) | (solution.x[2 * n_par + n_obs:] > 1e-6))} of {n_obs}")

import os
out = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out, exist_ok=True)
mps_path = os.path.join(out, "l1_regression.mps")
dump_mps(problem, mps_path)
print(f"\nproblem exported for external solvers: {mps_path}")
