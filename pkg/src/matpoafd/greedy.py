"""Plain and orthogonal greedy pursuit over a finite unit-norm dictionary.

The dictionary is the column set of a matrix. ``ga_decompose`` subtracts one
rank-one term per step from a running remainder; ``oga_decompose`` keeps
the remainder equal to the orthogonal complement of ``f`` against the span
of everything chosen so far. Forward selection is OGA followed by a
least-squares refit on the chosen columns.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError
from .linalg import as_matrix, as_vector, back_substitute, check_system
from .results import LsSolution


@dataclass(frozen=True)
class PursuitTrace:
    chosen: tuple[int, ...]
    per_step_score: np.ndarray
    per_step_residual_norm: np.ndarray
    coefficients: np.ndarray
    residual: np.ndarray


def normalize_dictionary(x, zero_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit-normalize the columns of ``x``, dropping zero columns.

    Returns ``(dictionary, kept_indices, norms_of_kept)``.
    """
    x = as_matrix(x, "x")
    norms = np.linalg.norm(x, axis=0)
    kept = np.flatnonzero(norms > zero_tol * np.maximum(1.0, norms.max()))
    return np.asfortranarray(x[:, kept] / norms[kept]), kept, norms[kept]


def _check_dictionary(dictionary, f, steps):
    d, f = check_system(dictionary, f)
    if steps < 1:
        raise PreconditionError("steps must be at least 1")
    norms = np.linalg.norm(d, axis=0)
    if np.any(np.abs(norms - 1.0) > 1e-10):
        raise PreconditionError("dictionary columns must have unit norm")
    return d, f


def ga_decompose(dictionary, f, steps: int) -> PursuitTrace:
    """Greedy algorithm with standard remainders ``r_{n+1} = r_n - <r_n, e_q> e_q``."""
    d, f = _check_dictionary(dictionary, f, steps)
    r = f.copy()
    coeffs = np.zeros(d.shape[1])
    chosen, scores, res = [], [], []
    for _ in range(steps):
        corr = d.T @ r
        q = int(np.argmax(np.abs(corr)))
        c = corr[q]
        r = r - c * d[:, q]
        coeffs[q] += c
        chosen.append(q)
        scores.append(abs(c))
        res.append(np.linalg.norm(r))
    return PursuitTrace(tuple(chosen), np.array(scores), np.array(res), coeffs, r)


def oga_decompose(dictionary, f, steps: int, sel_tol: float = 1e-12) -> PursuitTrace:
    """Orthogonal greedy algorithm (orthogonal matching pursuit).

    Chosen indices are never re-picked. Stops early once every remaining
    score is at most ``sel_tol * ||f||``. ``coefficients`` are the
    least-squares refit of ``f`` on the chosen columns.
    """
    d, f = _check_dictionary(dictionary, f, steps)
    m, n = d.shape
    threshold = sel_tol * np.linalg.norm(f)
    h = f.copy()
    basis = np.zeros((m, 0))
    r_cols: list[np.ndarray] = []
    available = np.ones(n, dtype=bool)
    chosen, scores, res = [], [], []
    while len(chosen) < min(steps, m, n) and available.any():
        corr = np.where(available, np.abs(d.T @ h), -1.0)
        q = int(np.argmax(corr))
        if not corr[q] > threshold:
            break
        e = d[:, q].copy()
        proj = np.zeros(basis.shape[1])
        for _ in range(2):
            c = basis.T @ e
            e -= basis @ c
            proj += c
        nrm = np.linalg.norm(e)
        available[q] = False
        if nrm <= 1e-12:
            continue
        basis = np.column_stack([basis, e / nrm])
        r_cols.append(np.append(proj, nrm))
        h = f - basis @ (basis.T @ f)
        chosen.append(q)
        scores.append(float(corr[q]))
        res.append(np.linalg.norm(h))

    coeffs = np.zeros(n)
    if chosen:
        k = len(chosen)
        r = np.zeros((k, k))
        for j, col in enumerate(r_cols):
            r[: j + 1, j] = col
        coeffs[chosen] = back_substitute(r, basis.T @ f)
    return PursuitTrace(tuple(chosen), np.array(scores), np.array(res), coeffs, h)


def step_scores(dictionary, residual, basis) -> tuple[np.ndarray, np.ndarray]:
    """OGA and POAFD selection scores for one step.

    ``basis`` holds orthonormal columns spanning the chosen elements and
    ``residual`` is the orthogonal remainder. The OGA score of ``e_q`` is
    ``|<h, e_q>|``; the POAFD score divides it by ``||Q(e_q)||``, the norm of
    ``e_q`` after co-projection off ``basis``. Elements whose co-projection
    vanishes (already in the span) get score 0 in both.
    """
    d = as_matrix(dictionary, "dictionary")
    h = as_vector(residual, "residual")
    basis = np.asarray(basis, dtype=np.float64).reshape(d.shape[0], -1)
    comp = d - basis @ (basis.T @ d)
    comp_norms = np.linalg.norm(comp, axis=0)
    oga = np.abs(d.T @ h)
    alive = comp_norms > 1e-12
    poafd = np.zeros_like(oga)
    poafd[alive] = oga[alive] / comp_norms[alive]
    oga = np.where(alive, oga, 0.0)
    return oga, poafd


def forward_selection(x, y, k: int | None = None, sel_tol: float = 1e-12) -> LsSolution:
    """Forward stepwise selection of up to ``k`` columns (OGA + refit)."""
    x, y = check_system(x, y)
    t0 = time.perf_counter()
    d, kept, norms = normalize_dictionary(x)
    w = np.zeros(x.shape[1])
    chosen: tuple[int, ...] = ()
    if kept.size:
        steps = k if k is not None else kept.size
        trace = oga_decompose(d, y, max(steps, 1), sel_tol=sel_tol) if steps > 0 else None
        if trace is not None:
            w[kept] = trace.coefficients / norms
            chosen = tuple(int(kept[i]) for i in trace.chosen)
    return LsSolution.from_solve(
        x, y, w, "fs",
        iterations=len(chosen),
        wall_time=time.perf_counter() - t0,
        selected=chosen,
    )
