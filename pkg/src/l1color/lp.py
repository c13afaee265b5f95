"""Sparse standard-form linear programming.

Solves  min c.x  s.t.  A x = b, x >= 0  with a Mehrotra predictor-corrector
primal-dual interior-point method. Each Newton step reduces to the normal
equations

    (A D^2 A^T) dy = r,    D^2 = diag(x / z),

factorized sparsely with a small diagonal regularization. The solver never
self-certifies: callers can recompute optimality from scratch with
:func:`kkt_residuals`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionMismatchError, NumericalBreakdownError

try:  # CHOLMOD (via cvxopt) factorizes the SPD normal matrix far faster
    import cvxopt.cholmod as _cholmod
    from cvxopt import matrix as _cvx_matrix
    from cvxopt import spmatrix as _cvx_spmatrix

    _HAVE_CHOLMOD = True
except ImportError:  # pragma: no cover - cvxopt is a soft dependency
    _HAVE_CHOLMOD = False

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100
_REG0 = 1e-10
_REG_MAX = 1e-2
_STEP = 0.99
_BLOWUP = 1e15
_D_CLAMP = (1e-14, 1e14)


@dataclass
class LPProblem:
    """min c.x s.t. A_eq x = b_eq, x >= 0."""

    A_eq: sp.csr_matrix
    b_eq: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.A_eq = sp.csr_matrix(self.A_eq)
        self.b_eq = np.asarray(self.b_eq, dtype=np.float64).ravel()
        self.c = np.asarray(self.c, dtype=np.float64).ravel()
        m, n = self.A_eq.shape
        if self.b_eq.shape != (m,) or self.c.shape != (n,):
            raise DimensionMismatchError(
                f"A is {m}x{n} but b has {self.b_eq.size} and c {self.c.size} entries"
            )
        if m > n:
            raise DimensionMismatchError(f"more equality rows ({m}) than variables ({n})")
        if not (
            np.isfinite(self.A_eq.data).all()
            and np.isfinite(self.b_eq).all()
            and np.isfinite(self.c).all()
        ):
            raise ValueError("LP data must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.A_eq.shape


@dataclass
class LPSolution:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    objective: float
    status: str  # optimal | infeasible | unbounded | iteration-limit
    iterations: int


def kkt_residuals(p: LPProblem, s: LPSolution) -> tuple[float, float, float]:
    """(primal residual, dual residual, complementarity gap), recomputed.

    primal = ||A x - b||_inf, dual = ||A^T y + z - c||_inf, gap = x.z / n.
    """
    m, n = p.shape
    if s.x.shape != (n,) or s.y.shape != (m,) or s.z.shape != (n,):
        raise DimensionMismatchError("solution dimensions do not match problem")
    primal = float(np.abs(p.A_eq @ s.x - p.b_eq).max()) if m else 0.0
    dual = float(np.abs(p.A_eq.T @ s.y + s.z - p.c).max()) if n else 0.0
    gap = float(s.x @ s.z / n) if n else 0.0
    return primal, dual, gap


class _NormalEquations:
    """Sparse Cholesky of A diag(d) A^T + reg I with escalating regularization.

    CHOLMOD's symbolic analysis is computed once (the pattern never changes
    across interior-point iterations) and refactorized numerically each call;
    SuperLU is the fallback engine when cvxopt is absent.
    """

    def __init__(self, A: sp.csr_matrix):
        self.A = A.tocsr()
        self.AT = A.T.tocsr()
        self.m = A.shape[0]
        self._eye = sp.identity(self.m, format="csr")
        self._symbolic = None
        self._cached = None  # (nnz, cvxopt matrix) - pattern is iteration-invariant

    def factorize(self, d: np.ndarray, reg: float = _REG0):
        """Returns (solve, M_reg): a solver closure and the factorized matrix."""
        M = (self.A.multiply(d)).tocsr() @ self.AT
        while reg <= _REG_MAX:
            M_reg = M + reg * self._eye
            solve = self._try_factor(M_reg)
            if solve is not None:
                return solve, M_reg
            reg *= 100.0
        raise NumericalBreakdownError(
            "normal-equations factorization failed after regularization escalation"
        )

    def _try_factor(self, M_reg: sp.csr_matrix):
        if _HAVE_CHOLMOD:
            M_reg.sort_indices()
            if self._cached is not None and self._cached[0] == M_reg.nnz:
                Mc = self._cached[1]
                Mc.V = _cvx_matrix(M_reg.data)
            else:
                coo = M_reg.tocoo()
                Mc = _cvx_spmatrix(coo.data, coo.row.astype(int), coo.col.astype(int),
                                   (self.m, self.m))
                self._cached = (M_reg.nnz, Mc)
                self._symbolic = None
            try:
                if self._symbolic is None:
                    self._symbolic = _cholmod.symbolic(Mc)
                _cholmod.numeric(Mc, self._symbolic)
            except ArithmeticError:
                return None  # not positive definite at this regularization
            symbolic = self._symbolic

            def solve(rhs: np.ndarray) -> np.ndarray:
                buf = _cvx_matrix(rhs)
                _cholmod.solve(symbolic, buf)
                return np.asarray(buf).ravel()

            return solve
        try:
            return spla.splu(M_reg.tocsc()).solve
        except RuntimeError:
            return None


def _starting_point(A: sp.csr_matrix, b: np.ndarray, c: np.ndarray, engine: _NormalEquations):
    """Least-squares heuristic start, shifted well inside the positive orthant."""
    solve, _ = engine.factorize(np.ones(A.shape[1]))
    x = A.T @ solve(b)
    y = solve(A @ c)
    z = c - A.T @ y
    dx = max(1.0, 0.01 * np.abs(x).max(initial=0.0), -1.5 * x.min(initial=0.0))
    dz = max(1.0, 0.01 * np.abs(z).max(initial=0.0), -1.5 * z.min(initial=0.0))
    x = x + dx
    z = z + dz
    # balance the complementarity products (Mehrotra's delta-hat correction)
    gap = x @ z
    x = x + 0.5 * gap / z.sum()
    z = z + 0.5 * gap / x.sum()
    return x, y, z


def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
    """Largest step in [0, 1] keeping v + step*dv >= 0."""
    neg = dv < 0
    if not neg.any():
        return 1.0
    return min(1.0, float(np.min(-v[neg] / dv[neg])))


def solve_lp(
    p: LPProblem,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> LPSolution:
    """Mehrotra predictor-corrector solve.

    Returns the first iterate whose independently-defined residuals
    (see :func:`kkt_residuals`) all fall below ``tol``, or a solution
    carrying a non-optimal status.
    """
    if not 0.0 < tol <= 1e-2:
        raise ValueError("tol must be in (0, 1e-2]")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    A = p.A_eq
    b, c = p.b_eq, p.c
    m, n = A.shape
    engine = _NormalEquations(A)
    AT = engine.AT

    x, y, z = _starting_point(A, b, c, engine)
    b_ref = 1.0 + np.abs(b).max(initial=0.0)
    c_ref = 1.0 + np.abs(c).max(initial=0.0)

    status = "iteration-limit"
    iterations = 0
    best = (x, y, z)
    best_merit = np.inf
    stall = 0
    for k in range(max_iter + 1):
        rp = b - A @ x
        rd = c - AT @ y - z
        mu = x @ z / n
        iterations = k
        merit = max(
            np.abs(rp).max(initial=0.0) / b_ref,
            np.abs(rd).max(initial=0.0) / c_ref,
            mu,
        )
        if merit < best_merit:
            best, best_merit = (x, y, z), merit
        if (
            np.abs(rp).max(initial=0.0) <= tol * b_ref
            and np.abs(rd).max(initial=0.0) <= tol * c_ref
            and mu <= tol
        ):
            status = "optimal"
            break
        # degenerate endgames oscillate for dozens of iterations before
        # recovering, so there is no early stall exit; a failed run still
        # hands back the best iterate seen instead of a degenerated one
        if k == max_iter:
            x, y, z = best
            break
        if not (np.isfinite(x).all() and np.isfinite(z).all() and np.isfinite(y).all()):
            raise NumericalBreakdownError("iterates lost finiteness")
        # divergence heuristics: an unbounded dual certifies primal
        # infeasibility and vice versa
        if b @ y > _BLOWUP and np.abs(rd).max(initial=0.0) <= 1e-6 * c_ref:
            status = "infeasible"
            break
        if c @ x < -_BLOWUP and np.abs(rp).max(initial=0.0) <= 1e-6 * b_ref:
            status = "unbounded"
            break

        # clamping the scaling keeps the normal matrix factorizable once
        # complementary pairs become extreme
        d = np.clip(x / z, *_D_CLAMP)
        base_solve, M_reg = engine.factorize(d)

        def solve_refined(rhs):
            # iterative refinement until the residual stops improving; the
            # endgame needs the extra digits to cross the tolerance before
            # the scaling matrix degenerates
            dy = base_solve(rhs)
            r_norm = np.abs(rhs - M_reg @ dy).max(initial=0.0)
            floor = 1e-13 * (1.0 + np.abs(rhs).max(initial=0.0))
            for _ in range(8):
                if r_norm <= floor:
                    break
                cand = dy + base_solve(rhs - M_reg @ dy)
                cand_norm = np.abs(rhs - M_reg @ cand).max(initial=0.0)
                if cand_norm >= 0.5 * r_norm:
                    break
                dy, r_norm = cand, cand_norm
            return dy

        def newton(rc):
            rhs = rp - A @ ((rc - x * rd) / z)
            dy = solve_refined(rhs)
            dz = rd - AT @ dy
            dx = (rc - x * dz) / z
            return dx, dy, dz

        # predictor: pure Newton step toward complementarity zero
        dx_a, dy_a, dz_a = newton(-x * z)
        ap = _max_step(x, dx_a)
        ad = _max_step(z, dz_a)
        mu_aff = (x + ap * dx_a) @ (z + ad * dz_a) / n
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0

        # corrector: recenter and cancel the second-order term; the cap keeps
        # degenerate pairs (x_i, z_i both ~0) from poisoning the target
        corr = np.clip(dx_a * dz_a, -100.0 * mu, 100.0 * mu)
        dx, dy, dz = newton(sigma * mu - x * z - corr)
        ap = _STEP * _max_step(x, dx)
        ad = _STEP * _max_step(z, dz)
        x = x + ap * dx
        y = y + ad * dy
        z = z + ad * dz

    return LPSolution(
        x=x, y=y, z=z, objective=float(c @ x), status=status, iterations=iterations
    )


# ---------------------------------------------------------------------------
# MPS fixed-format dump/load (for cross-checking against external solvers)
# ---------------------------------------------------------------------------


def _mps_number(v: float) -> str:
    """Most precise representation of v that fits the 12-character value field."""
    for prec in range(15, 3, -1):
        s = "%.*g" % (prec, v)
        # a bare leading zero wastes one of the twelve columns
        if s.startswith("0."):
            s = s[1:]
        elif s.startswith("-0."):
            s = "-" + s[2:]
        if len(s) <= 12:
            return s
    return "%.3e" % v


def dump_mps(p: LPProblem, path, name: str = "L1COLOR") -> None:
    """Write the problem in MPS fixed format (equality rows, x >= 0 implicit)."""
    A = p.A_eq.tocsc()
    m, n = A.shape
    lines = [f"NAME          {name:<8}", "ROWS", " N  COST"]
    lines += [f" E  R{i + 1:07d}" for i in range(m)]
    lines.append("COLUMNS")
    for j in range(n):
        entries = []
        if p.c[j] != 0.0:
            entries.append(("COST", p.c[j]))
        start, end = A.indptr[j], A.indptr[j + 1]
        entries += [
            (f"R{A.indices[k] + 1:07d}", A.data[k]) for k in range(start, end)
        ]
        for i in range(0, len(entries), 2):
            pair = entries[i : i + 2]
            line = f"    X{j + 1:07d}  {pair[0][0]:<8}  {_mps_number(pair[0][1]):<12}"
            if len(pair) == 2:
                line += f"   {pair[1][0]:<8}  {_mps_number(pair[1][1]):<12}"
            lines.append(line.rstrip())
    lines.append("RHS")
    for i in range(m):
        if p.b_eq[i] != 0.0:
            lines.append(f"    RHS       R{i + 1:07d}  {_mps_number(p.b_eq[i]):<12}".rstrip())
    lines.append("ENDATA")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_mps(path) -> LPProblem:
    """Read back a file produced by :func:`dump_mps`."""
    section = None
    row_index: dict[str, int] = {}
    col_index: dict[str, int] = {}
    coo_rows, coo_cols, coo_vals = [], [], []
    c_entries: dict[int, float] = {}
    b_entries: dict[int, float] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line or line.startswith("*"):
                continue
            if not line.startswith(" "):
                section = line.split()[0]
                continue
            fields = line.split()
            if section == "ROWS":
                kind, rname = fields[0], fields[1]
                if kind == "N":
                    continue
                if kind != "E":
                    raise ValueError(f"only equality rows supported, got {kind}")
                row_index[rname] = len(row_index)
            elif section == "COLUMNS":
                cname = fields[0]
                j = col_index.setdefault(cname, len(col_index))
                for rname, val in zip(fields[1::2], fields[2::2]):
                    if rname == "COST":
                        c_entries[j] = float(val)
                    else:
                        coo_rows.append(row_index[rname])
                        coo_cols.append(j)
                        coo_vals.append(float(val))
            elif section == "RHS":
                for rname, val in zip(fields[1::2], fields[2::2]):
                    b_entries[row_index[rname]] = float(val)
    m, n = len(row_index), len(col_index)
    A = sp.coo_matrix((coo_vals, (coo_rows, coo_cols)), shape=(m, n)).tocsr()
    b = np.zeros(m)
    for i, v in b_entries.items():
        b[i] = v
    c = np.zeros(n)
    for j, v in c_entries.items():
        c[j] = v
    return LPProblem(A, b, c)
