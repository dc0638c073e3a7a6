"""Name-based dispatch over every solver in the package.

``run_method`` is what the benchmark harness and the CLI call. Method tags:

``poafd``      Matrix-POAFD least squares
``two_step``   pseudo-inverse via two LS solves (inner solver selectable)
``one_step``   pseudo-inverse via one LS solve on ``x x^T``
``mp``         SVD pseudo-inverse
``lsqr``, ``cgls``, ``ridge``, ``pcr``, ``lasso``, ``fs``  baselines
"""

from __future__ import annotations

import numpy as np

from .exceptions import PreconditionError
from .greedy import forward_selection
from .linalg import check_system, jacobi_svd
from .pinv import LsSolver, pinv_one_step, pinv_svd, pinv_two_step
from .poafd import SolveConfig, solve_ls
from .results import LsSolution
from .solvers import cgls, lasso_cd, lsqr, pcr, ridge

LS_METHODS = ("poafd", "lsqr", "cgls", "ridge", "pcr", "lasso", "fs")
PINV_METHODS = ("two_step", "one_step", "mp")
METHODS = LS_METHODS + PINV_METHODS
INNER_SOLVERS = ("poafd", "lsqr", "cgls")
SWEEPABLE = ("poafd", "two_step", "pcr", "lasso", "fs")

# Inner Krylov solves of the pseudo-inverse routines run to the rounding
# floor; at the default 1e-10 / 4 min(m, n) they stall on conditioned inputs.
INNER_TOL = 1e-14
INNER_ITER_FACTOR = 50

LASSO_GRID_POINTS = 10
LASSO_GRID_DECADES = 3.0


def make_ls_solver(name: str, cfg: SolveConfig | None = None, tol: float | None = None,
                   max_iter: int | None = None) -> LsSolver:
    """Return ``solver(x, y) -> LsSolution`` for a pseudo-inverse inner solve."""
    if name == "poafd":
        return lambda a, b: solve_ls(a, b, cfg)
    t = INNER_TOL if tol is None else tol

    def iters(a):
        return max_iter if max_iter is not None else INNER_ITER_FACTOR * min(a.shape)

    if name == "lsqr":
        # no condition-number cutoff: one_step hands LSQR x x^T, whose condition is squared
        return lambda a, b: lsqr(a, b, atol=t, btol=t, max_iter=iters(a), conlim=np.inf)
    if name == "cgls":
        return lambda a, b: cgls(a, b, tol=t, max_iter=iters(a))
    raise PreconditionError(f"unknown inner solver {name!r}; choose from {', '.join(INNER_SOLVERS)}")


def default_ridge_lambda(x) -> float:
    """``1e-6 * trace(X^T X) / n``."""
    return 1e-6 * float(np.sum(x * x)) / x.shape[1]


def lasso_grid(x, y) -> np.ndarray:
    """Decreasing log-spaced penalties starting at ``max|X^T y|``."""
    lam_max = float(np.abs(x.T @ y).max())
    if lam_max == 0.0:
        lam_max = 1.0
    return lam_max * np.logspace(0.0, -LASSO_GRID_DECADES, LASSO_GRID_POINTS)


def lasso_for_support(x, y, target: int) -> LsSolution:
    """Grid LASSO fit whose support size is closest to ``target`` (larger penalty on ties)."""
    best = None
    for lam in lasso_grid(x, y):
        sol = lasso_cd(x, y, lam)
        gap = abs(int(np.count_nonzero(sol.w)) - target)
        if best is None or gap < best[0]:
            best = (gap, sol)
        if gap == 0:
            break
    return best[1]


def lasso_holdout(x, y, frac: float = 0.8) -> LsSolution:
    """Pick the grid penalty with the lowest error on the trailing rows, then refit on all rows."""
    m = x.shape[0]
    grid = lasso_grid(x, y)
    cut = int(round(frac * m))
    if cut < 1 or cut >= m:
        return lasso_cd(x, y, grid[-1])
    xt, yt, xv, yv = x[:cut], y[:cut], x[cut:], y[cut:]
    if np.any(np.einsum("ij,ij->j", xt, xt) == 0.0):
        return lasso_cd(x, y, grid[-1])
    errs = [np.linalg.norm(xv @ lasso_cd(xt, yt, lam).w - yv) for lam in grid]
    return lasso_cd(x, y, grid[int(np.argmin(errs))])


def run_method(
    name: str,
    x,
    y,
    *,
    feature_count: int | None = None,
    cfg: SolveConfig | None = None,
    inner: str = "poafd",
    lam: float | None = None,
    k: int | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
) -> LsSolution:
    """Run method ``name`` on ``x w = y``.

    ``feature_count`` caps the number of selected features for sweepable
    methods (POAFD selections, forward-selection steps, PCR components,
    LASSO support via the penalty grid) and is ignored by the others.
    """
    x, y = check_system(x, y)
    cfg = cfg or SolveConfig()
    if feature_count is not None and name in ("poafd", "two_step"):
        cfg = SolveConfig(
            zero_col_tol=cfg.zero_col_tol, sel_tol=cfg.sel_tol, max_select=feature_count,
            tie_break=cfg.tie_break, reorth=cfg.reorth,
        )

    if name == "poafd":
        return solve_ls(x, y, cfg)
    if name == "lsqr":
        t = 1e-10 if tol is None else tol
        return lsqr(x, y, atol=t, btol=t, max_iter=max_iter)
    if name == "cgls":
        return cgls(x, y, tol=1e-10 if tol is None else tol, max_iter=max_iter)
    if name == "ridge":
        return ridge(x, y, default_ridge_lambda(x) if lam is None else lam)
    if name == "pcr":
        if k is None:
            f = jacobi_svd(x)
            k = f.rank if feature_count is None else feature_count
            return pcr(x, y, k, svd=f)
        return pcr(x, y, k)
    if name == "lasso":
        if lam is not None:
            return lasso_cd(x, y, lam)
        if feature_count is not None:
            return lasso_for_support(x, y, feature_count)
        return lasso_holdout(x, y)
    if name == "fs":
        return forward_selection(x, y, feature_count if k is None else k)
    if name == "mp":
        return pinv_svd(x, y).as_solution()
    if name == "two_step":
        if inner == "poafd":
            # Only step 1 honours the feature cap; step 2 must run to completion.
            first = make_ls_solver("poafd", cfg)
            full = make_ls_solver("poafd", SolveConfig(zero_col_tol=cfg.zero_col_tol,
                                                        sel_tol=cfg.sel_tol, reorth=cfg.reorth))
            steps = iter((first, full))
            return pinv_two_step(x, y, lambda a, b: next(steps)(a, b)).as_solution()
        return pinv_two_step(x, y, make_ls_solver(inner, cfg, tol, max_iter)).as_solution()
    if name == "one_step":
        return pinv_one_step(x, y, make_ls_solver(inner, cfg, tol, max_iter)).as_solution()
    raise PreconditionError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
