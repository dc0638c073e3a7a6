"""Matrix-POAFD least-squares solver.

Each step picks the column of the current induced matrix whose direction
best correlates with ``y``, normalizes it into a new orthonormal direction
``u_l``, and co-projects every column of the induced matrix against
``u_l``. The run stops when every remaining column is numerically zero or
orthogonal to ``y``. The coefficients ``a_l = <y, u_l>`` give the projection
of ``y`` onto the column span; solving ``R w~ = a`` with the Gram-Schmidt
factor ``R`` of the selected columns maps it back to a weight vector.

Column indices are 0-based throughout.
"""

from __future__ import annotations

import time
from collections.abc import Collection
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PreconditionError
from .linalg import EPS, as_matrix, as_vector, back_substitute, check_system
from .results import LsSolution


# Safety multiple on the per-step rounding estimate EPS / rho_l.
DRIFT_FACTOR = 16.0


@dataclass(frozen=True)
class SolveConfig:
    """Tolerances and limits for :func:`poafd_iterate`.

    ``max_select=None`` means "up to the number of columns". Only the
    ``"smallest"`` tie-break (lowest column index wins) is supported.
    """

    zero_col_tol: float = 1e-12
    sel_tol: float = 1e-12
    max_select: int | None = None
    tie_break: str = "smallest"
    reorth: bool = True

    def __post_init__(self):
        if not (self.zero_col_tol > 0 and self.sel_tol > 0):
            raise PreconditionError("tolerances must be positive")
        if self.max_select is not None and self.max_select < 1:
            raise PreconditionError("max_select must be at least 1")
        if self.tie_break != "smallest":
            raise PreconditionError(f"unsupported tie_break policy {self.tie_break!r}")


@dataclass(frozen=True)
class PoafdModel:
    """Outcome of a POAFD run.

    ``x[:, selected] == u @ r`` up to rounding, ``u`` has orthonormal
    columns and ``a[l] = <y, u[:, l]>``. ``scores[l]`` is the selection
    score of ``selected[l]`` at step ``l``.
    """

    selected: tuple[int, ...]
    u: np.ndarray
    r: np.ndarray
    a: np.ndarray
    y_norm: float
    scores: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_selected(self) -> int:
        return len(self.selected)

    @property
    def residual_energy(self) -> float:
        """``||y||^2 - sum(a_l^2)``, the squared least-squares residual."""
        return float(self.y_norm**2 - self.a @ self.a)

    def partial_energies(self) -> np.ndarray:
        """Cumulative captured energy after each selection."""
        return np.cumsum(self.a**2)


def _column_scale(norms: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, norms)


def select_column(
    x_cur,
    y,
    cfg: SolveConfig | None = None,
    excluded: Collection[int] = (),
    col_scale: np.ndarray | None = None,
) -> tuple[int, float] | None:
    """Pick the column of ``x_cur`` maximizing ``|<y, c / ||c||>|``.

    Columns with norm at most ``zero_col_tol * col_scale`` count as zero;
    ``col_scale`` defaults to ``max(1, ||c||)`` of the columns passed in.
    Returns ``None`` when no column scores above ``sel_tol * ||y||``.
    """
    cfg = cfg or SolveConfig()
    x_cur, y = check_system(x_cur, y)
    norms = np.linalg.norm(x_cur, axis=0)
    scale = _column_scale(norms) if col_scale is None else np.asarray(col_scale, dtype=float)
    alive = norms > cfg.zero_col_tol * scale
    if excluded:
        alive[list(excluded)] = False
    return _best(x_cur, y, norms, alive, cfg.sel_tol * np.linalg.norm(y))


def _best(work, y, norms, alive, threshold):
    if not alive.any():
        return None
    scores = np.zeros(work.shape[1])
    scores[alive] = np.abs(y @ work[:, alive]) / norms[alive]
    k = int(np.argmax(scores))  # first maximizer = smallest index
    if not scores[k] > threshold:
        return None
    return k, float(scores[k])


def poafd_iterate(x, y, cfg: SolveConfig | None = None) -> PoafdModel:
    """Run Matrix-POAFD selection on ``x w = y`` and return the model."""
    cfg = cfg or SolveConfig()
    x, y = check_system(x, y)
    m, n = x.shape
    limit = min(n, m, cfg.max_select or n)

    work = np.array(x, order="F")
    orig_norms = np.linalg.norm(x, axis=0)
    scale = _column_scale(orig_norms)
    alive = orig_norms > cfg.zero_col_tol * scale
    y_norm = float(np.linalg.norm(y))
    threshold = cfg.sel_tol * y_norm

    # Each direction u_l built from a column that cancelled down to a fraction
    # rho_l of its norm carries ~EPS / rho_l of directional error, which leaks
    # into every later co-projection. ``drift`` tracks that floor.
    drift = 0.0
    selected: list[int] = []
    us: list[np.ndarray] = []
    coeff_rows: list[np.ndarray] = []  # u_l^T X^(l), used to fill R
    diag: list[float] = []
    extras: list[np.ndarray] = []
    scores: list[float] = []

    while len(selected) < limit:
        norms = np.linalg.norm(work, axis=0)
        alive &= norms > np.maximum(cfg.zero_col_tol * scale, drift * orig_norms)
        pick = _best(work, y, norms, alive, threshold)
        if pick is None:
            break
        k, score = pick
        v = work[:, k].copy()
        d = norms[k]
        extra = np.zeros(len(us))
        if cfg.reorth and us and d * d < 0.5 * orig_norms[k] ** 2:
            basis = np.column_stack(us)
            extra = basis.T @ v
            v -= basis @ extra
            d = float(np.linalg.norm(v))
            if not d > max(cfg.zero_col_tol * scale[k], drift * orig_norms[k]):
                alive[k] = False
                work[:, k] = 0.0
                continue
        u = v / d
        drift += DRIFT_FACTOR * EPS * orig_norms[k] / d
        row = u @ work
        work -= np.outer(u, row)
        work[:, k] = 0.0
        alive[k] = False

        selected.append(k)
        us.append(u)
        coeff_rows.append(row)
        diag.append(d)
        extras.append(extra)
        scores.append(score)

    n_sel = len(selected)
    r = np.zeros((n_sel, n_sel), order="F")
    for l, k in enumerate(selected):
        for j in range(l):
            r[j, l] = coeff_rows[j][k] + extras[l][j]
        r[l, l] = diag[l]
    u_mat = np.column_stack(us) if us else np.zeros((m, 0))
    a = u_mat.T @ y
    return PoafdModel(
        selected=tuple(selected),
        u=np.asfortranarray(u_mat),
        r=r,
        a=a,
        y_norm=y_norm,
        scores=np.array(scores),
    )


def assemble_solution(model: PoafdModel, n: int) -> np.ndarray:
    """Weight vector of length ``n``: zero off the selected columns, ``R^{-1} a`` on them."""
    if model.selected and n <= max(model.selected):
        raise PreconditionError(f"n={n} too small for selected column {max(model.selected)}")
    w = np.zeros(n)
    if model.selected:
        w[list(model.selected)] = back_substitute(model.r, model.a)
    return w


def solve_ls(x, y, cfg: SolveConfig | None = None) -> LsSolution:
    """Least-squares solve by Matrix-POAFD; ``info`` carries the model."""
    cfg = cfg or SolveConfig()
    x, y = check_system(x, y)
    t0 = time.perf_counter()
    model = poafd_iterate(x, y, cfg)
    w = assemble_solution(model, x.shape[1])
    elapsed = time.perf_counter() - t0
    return LsSolution.from_solve(
        x, y, w, "poafd",
        iterations=model.n_selected,
        converged=True,
        wall_time=elapsed,
        model=model,
    )


def solve_ls_columns(x, ys, cfg: SolveConfig | None = None) -> list[LsSolution]:
    """Solve for each column of ``ys`` independently."""
    x = as_matrix(x, "x")
    ys = as_matrix(ys, "ys")
    return [solve_ls(x, as_vector(ys[:, j]), cfg) for j in range(ys.shape[1])]
