"""Minimum-norm least-squares (Moore-Penrose) solutions.

``pinv_two_step`` solves ``x w1 = y`` and then ``x.T w2 = w1`` in the
least-squares sense and returns ``x.T w2``. ``pinv_one_step`` solves
``(x x.T) w = y`` once and returns ``x.T w``. Any least-squares solver can
be plugged in for the inner solves; both constructions land in the row
space of ``x`` regardless of which LS solution the solver returns.
``pinv_svd`` is the SVD reference.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .exceptions import MatpoafdError, SizeLimitError
from .linalg import check_system, jacobi_svd
from .poafd import SolveConfig, solve_ls
from .results import LsSolution

LsSolver = Callable[[np.ndarray, np.ndarray], LsSolution]

ONE_STEP_M_CAP = 5000


@dataclass(frozen=True)
class PinvResult:
    w_dagger: np.ndarray
    residual_norm: float
    solution_norm: float
    method: str
    inner: tuple[LsSolution, ...] = ()
    wall_time: float = 0.0

    def as_solution(self) -> LsSolution:
        return LsSolution(
            w=self.w_dagger,
            residual_norm=self.residual_norm,
            solution_norm=self.solution_norm,
            method=self.method,
            iterations=sum(s.iterations for s in self.inner),
            converged=all(s.converged for s in self.inner),
            wall_time=self.wall_time,
            info={"inner": self.inner},
        )


def _result(x, y, w, method, inner, t0) -> PinvResult:
    return PinvResult(
        w_dagger=w,
        residual_norm=float(np.linalg.norm(x @ w - y)),
        solution_norm=float(np.linalg.norm(w)),
        method=method,
        inner=tuple(inner),
        wall_time=time.perf_counter() - t0,
    )


def _default_solver(cfg: SolveConfig | None) -> LsSolver:
    return lambda a, b: solve_ls(a, b, cfg)


def _inner_solve(solver: LsSolver, a, b, label: str) -> LsSolution:
    try:
        return solver(a, b)
    except MatpoafdError as exc:
        raise type(exc)(f"{label}: {exc}") from exc


def pinv_two_step(x, y, ls_solver: LsSolver | None = None,
                  cfg: SolveConfig | None = None) -> PinvResult:
    """Pseudo-inverse solution from two consecutive least-squares solves."""
    x, y = check_system(x, y)
    solver = ls_solver or _default_solver(cfg)
    t0 = time.perf_counter()
    first = _inner_solve(solver, x, y, "step 1 (x w1 = y)")
    xt = np.asfortranarray(x.T)
    second = _inner_solve(solver, xt, first.w, "step 2 (x^T w2 = w1)")
    return _result(x, y, xt @ second.w, "two_step", (first, second), t0)


def pinv_one_step(x, y, ls_solver: LsSolver | None = None, cfg: SolveConfig | None = None,
                  m_cap: int = ONE_STEP_M_CAP) -> PinvResult:
    """Pseudo-inverse solution from one least-squares solve on ``x x^T``."""
    x, y = check_system(x, y)
    m = x.shape[0]
    if m > m_cap:
        raise SizeLimitError(f"x x^T would be {m} x {m}, above the cap of {m_cap}")
    solver = ls_solver or _default_solver(cfg)
    t0 = time.perf_counter()
    gram = x @ x.T
    gram = np.asfortranarray((gram + gram.T) / 2)
    inner = _inner_solve(solver, gram, y, "one step ((x x^T) w = y)")
    return _result(x, y, x.T @ inner.w, "one_step", (inner,), t0)


def pinv_svd(x, y) -> PinvResult:
    """``V diag(1/sigma) U^T y`` over the numerically non-zero singular values."""
    x, y = check_system(x, y)
    t0 = time.perf_counter()
    f = jacobi_svd(x)
    w = f.v @ ((f.u.T @ y) / f.sigma) if f.rank else np.zeros(x.shape[1])
    return _result(x, y, w, "svd", (), t0)
