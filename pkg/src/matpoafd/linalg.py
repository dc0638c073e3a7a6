"""Dense real kernels: inner products, co-projection, triangular and
Cholesky solves, and a one-sided Jacobi SVD.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64.
Helpers :func:`as_matrix` and :func:`as_vector` validate shape and
finiteness; every public kernel runs its inputs through them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import (
    ConvergenceError,
    DimensionError,
    FactorizationError,
    PreconditionError,
    SingularError,
)

EPS = 2.22e-16
JACOBI_MAX_SWEEPS = 50


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D float64 array (Fortran order)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite entries")
    return np.asfortranarray(arr)


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a finite 1-D float64 array; n x 1 columns are flattened."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise DimensionError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite entries")
    return arr


def check_system(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a pseudo-equation ``x @ w = y`` and return the coerced pair."""
    x = as_matrix(x, "x")
    y = as_vector(y, "y")
    if y.shape[0] != x.shape[0]:
        raise DimensionError(f"y has length {y.shape[0]} but x has {x.shape[0]} rows")
    return x, y


def inner(u, v) -> float:
    """Euclidean inner product."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return float(u @ v)


def coproject(v, u_unit) -> np.ndarray:
    """Gram-Schmidt co-projection ``v - <v, u> u`` for a unit vector ``u``."""
    v = as_vector(v, "v")
    u = as_vector(u_unit, "u_unit")
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {v.shape[0]} vs {u.shape[0]}")
    nrm = np.linalg.norm(u)
    if abs(nrm - 1.0) > 1e-10:
        raise PreconditionError(f"u_unit must have unit norm, got {nrm!r}")
    return v - (v @ u) * u


def back_substitute(r, b) -> np.ndarray:
    """Solve ``r @ x = b`` for upper-triangular ``r``.

    Raises :class:`SingularError` when some ``|r[i, i]|`` is at most
    ``1e-14 * max|r[i, i]|``.
    """
    r = as_matrix(r, "r")
    b = as_vector(b, "b")
    n = r.shape[0]
    if r.shape[1] != n:
        raise DimensionError(f"r must be square, got {r.shape}")
    if b.shape[0] != n:
        raise DimensionError(f"b has length {b.shape[0]}, expected {n}")
    diag = np.abs(np.diag(r))
    if diag.max() == 0.0 or np.any(diag <= 1e-14 * diag.max()):
        raise SingularError("triangular factor has a near-zero diagonal entry")
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - r[i, i + 1:] @ x[i + 1:]) / r[i, i]
    return x


def forward_substitute(l, b) -> np.ndarray:
    """Solve ``l @ x = b`` for lower-triangular ``l`` with non-zero diagonal."""
    n = l.shape[0]
    x = np.empty(n)
    for i in range(n):
        x[i] = (b[i] - l[i, :i] @ x[:i]) / l[i, i]
    return x


def cholesky_factor(a) -> np.ndarray:
    """Lower-triangular ``l`` with ``l @ l.T == a`` for symmetric positive-definite ``a``.

    A pivot at or below ``n * EPS * max|a_ii|`` raises :class:`FactorizationError`.
    """
    a = as_matrix(a, "a")
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"a must be square, got {a.shape}")
    scale = np.abs(a).max()
    if np.abs(a - a.T).max() > 1e-12 * max(scale, 1.0):
        raise PreconditionError("a is not symmetric")
    l = np.zeros((n, n), order="F")
    # Pivots lost to cancellation below this floor are rounding noise, not positive.
    floor = n * EPS * max(float(np.abs(np.diag(a)).max()), 0.0)
    for j in range(n):
        d = a[j, j] - l[j, :j] @ l[j, :j]
        if not d > floor:
            raise FactorizationError(f"non-positive pivot {d!r} at column {j}")
        l[j, j] = np.sqrt(d)
        if j + 1 < n:
            l[j + 1:, j] = (a[j + 1:, j] - l[j + 1:, :j] @ l[j, :j]) / l[j, j]
    return l


def cholesky_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for symmetric positive-definite ``a``."""
    b = as_vector(b, "b")
    l = cholesky_factor(a)
    if b.shape[0] != l.shape[0]:
        raise DimensionError(f"b has length {b.shape[0]}, expected {l.shape[0]}")
    z = forward_substitute(l, b)
    return back_substitute(np.ascontiguousarray(l.T), z)


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD ``m = u @ diag(sigma) @ v.T`` truncated at ``rank_tol``."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank_tol: float

    @property
    def rank(self) -> int:
        return int(self.sigma.shape[0])

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.T


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Tournament schedule: every pair appears once per sweep, and pairs within
    # a round are disjoint so a whole round can be rotated at once.
    players = list(range(n)) + ([-1] if n % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        ps, qs = [], []
        for i in range(k // 2):
            p, q = players[i], players[k - 1 - i]
            if p >= 0 and q >= 0:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def jacobi_svd(m, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SvdFactors:
    """One-sided (Hestenes) Jacobi SVD.

    Columns of the taller orientation are rotated pairwise until mutually
    orthogonal; singular values are the final column norms. Values at or
    below ``max(rows, cols) * EPS * sigma_max`` are dropped.
    """
    a = as_matrix(m, "m")
    rows, cols = a.shape
    transposed = rows < cols
    work = np.array(a.T if transposed else a, dtype=np.float64, order="F")
    p, q = work.shape
    v = np.eye(q, order="F")
    tol = max(p, 1) * EPS

    if q > 1:
        schedule = _round_robin(q)
        for _ in range(max_sweeps):
            rotated = False
            for ps, qs in schedule:
                ap = work[:, ps]
                aq = work[:, qs]
                alpha = np.einsum("ij,ij->j", ap, ap)
                beta = np.einsum("ij,ij->j", aq, aq)
                gamma = np.einsum("ij,ij->j", ap, aq)
                active = np.abs(gamma) > tol * np.sqrt(alpha * beta)
                if not active.any():
                    continue
                rotated = True
                ps, qs = ps[active], qs[active]
                ap, aq = ap[:, active], aq[:, active]
                alpha, beta, gamma = alpha[active], beta[active], gamma[active]
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                work[:, ps] = c * ap - s * aq
                work[:, qs] = s * ap + c * aq
                vp = v[:, ps]
                vq = v[:, qs]
                v[:, ps] = c * vp - s * vq
                v[:, qs] = s * vp + c * vq
            if not rotated:
                break
        else:
            raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")

    norms = np.linalg.norm(work, axis=0)
    order = np.argsort(-norms, kind="stable")
    norms = norms[order]
    sigma_max = norms[0] if norms.size else 0.0
    rank_tol = max(rows, cols) * EPS * sigma_max
    keep = order[norms > rank_tol]
    sigma = norms[norms > rank_tol]
    left = work[:, keep] / sigma if sigma.size else np.zeros((p, 0))
    right = v[:, keep]
    if transposed:
        left, right = right, left
    return SvdFactors(u=np.asfortranarray(left), sigma=sigma, v=np.asfortranarray(right),
                      rank_tol=float(rank_tol))


def orthonormal_complement(basis: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the complement of span(``basis``) in R^dim.

    ``basis`` is a ``dim x k`` array with orthonormal columns (``k`` may be 0).
    """
    q = np.array(basis, dtype=np.float64).reshape(dim, -1)
    target = dim - q.shape[1]
    out = []
    for i in range(dim):
        if len(out) == target:
            break
        e = np.zeros(dim)
        e[i] = 1.0
        for _ in range(2):
            e -= q @ (q.T @ e)
        nrm = np.linalg.norm(e)
        if nrm > 1e-8:
            e /= nrm
            q = np.column_stack([q, e])
            out.append(e)
    return np.column_stack(out) if out else np.zeros((dim, 0))


def null_space(x) -> np.ndarray:
    """Orthonormal basis (columns) of ``{w : x @ w = 0}`` via :func:`jacobi_svd`."""
    x = as_matrix(x, "x")
    f = jacobi_svd(x)
    return orthonormal_complement(f.v, x.shape[1])
