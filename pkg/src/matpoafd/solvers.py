"""Classical least-squares baselines.

All routines take a dense ``x`` (m x n) and ``y`` (m,) and return an
:class:`~matpoafd.results.LsSolution`.
"""

from __future__ import annotations

import time

import numpy as np

from .exceptions import PreconditionError
from .linalg import EPS, check_system, cholesky_solve, jacobi_svd
from .results import LsSolution


CGLS_FLOOR = 10.0
# CGLS works on the squared condition number and loses orthogonality sooner
# than LSQR, so its default budget is wider than LSQR's 4 min(m, n).
CGLS_ITER_FACTOR = 10


def normal_equations(x, y) -> LsSolution:
    """Solve ``x.T x w = x.T y`` by Cholesky. Requires full column rank."""
    x, y = check_system(x, y)
    t0 = time.perf_counter()
    w = cholesky_solve(x.T @ x, x.T @ y)
    return LsSolution.from_solve(x, y, w, "normal", wall_time=time.perf_counter() - t0)


def lsqr(x, y, atol: float = 1e-10, btol: float = 1e-10, max_iter: int | None = None,
         conlim: float = 1e8) -> LsSolution:
    """Paige-Saunders LSQR (no damping) started from ``w = 0``.

    Stops when ``||r|| <= btol ||y|| + atol ||X|| ||w||`` (compatible
    systems), when ``||X^T r|| <= atol ||X|| ||r||`` (least squares), or when
    the condition estimate exceeds ``conlim``. ``||X||`` is the running
    Frobenius-norm estimate of the bidiagonal factor.
    """
    x, y = check_system(x, y)
    m, n = x.shape
    if max_iter is None:
        max_iter = 4 * min(m, n)
    if max_iter < 1:
        raise PreconditionError("max_iter must be at least 1")
    t0 = time.perf_counter()

    w = np.zeros(n)
    u = y.copy()
    beta = np.linalg.norm(u)
    bnorm = beta
    if beta > 0:
        u /= beta
    v = x.T @ u
    alpha = np.linalg.norm(v)
    if alpha > 0:
        v /= alpha
    d = v.copy()
    phibar, rhobar = beta, alpha
    anorm = 0.0
    ddnorm = 0.0
    itn = 0
    converged = alpha * beta == 0.0
    stop = "zero" if converged else "max_iter"

    while not converged and itn < max_iter:
        itn += 1
        u = x @ v - alpha * u
        beta = np.linalg.norm(u)
        if beta > 0:
            u /= beta
        anorm = np.sqrt(anorm**2 + alpha**2 + beta**2)
        v_next = x.T @ u - beta * v
        alpha_next = np.linalg.norm(v_next)
        if alpha_next > 0:
            v_next /= alpha_next

        rho = np.hypot(rhobar, beta)
        c, s = rhobar / rho, beta / rho
        theta = s * alpha_next
        rhobar = -c * alpha_next
        phi = c * phibar
        phibar = s * phibar

        ddnorm += np.dot(d, d) / rho**2
        w += (phi / rho) * d
        d = v_next - (theta / rho) * d
        v, alpha = v_next, alpha_next

        rnorm = phibar
        arnorm = alpha * abs(c * phibar)
        acond = anorm * np.sqrt(ddnorm)
        xnorm = np.linalg.norm(w)
        if rnorm <= btol * bnorm + atol * anorm * xnorm:
            converged, stop = True, "compatible"
        elif arnorm <= atol * anorm * rnorm:
            converged, stop = True, "least_squares"
        elif acond >= conlim:
            stop = "conlim"
            break
        elif alpha == 0.0 or beta == 0.0:
            # Krylov space exhausted; accept if the true residual agrees.
            r = y - x @ w
            true_rnorm = np.linalg.norm(r)
            converged = bool(
                np.linalg.norm(x.T @ r) <= atol * anorm * true_rnorm
                or true_rnorm <= btol * bnorm + atol * anorm * xnorm
            )
            stop = "breakdown"
            break

    return LsSolution.from_solve(
        x, y, w, "lsqr",
        iterations=itn, converged=converged, wall_time=time.perf_counter() - t0, stop=stop,
    )


def cgls(x, y, tol: float = 1e-10, max_iter: int | None = None) -> LsSolution:
    """Conjugate gradients on ``x.T x w = x.T y`` in factored form.

    ``max_iter`` defaults to ``CGLS_ITER_FACTOR * min(m, n)``.

    Stops when ``||X^T (y - X w)|| <= tol * ||X^T y||``, or when it reaches
    the rounding floor ``CGLS_FLOOR * EPS * ||X||_F * ||r||`` below which the
    normal residual cannot be resolved; both count as converged.
    """
    x, y = check_system(x, y)
    m, n = x.shape
    if max_iter is None:
        max_iter = CGLS_ITER_FACTOR * min(m, n)
    if max_iter < 1:
        raise PreconditionError("max_iter must be at least 1")
    t0 = time.perf_counter()

    w = np.zeros(n)
    r = y.copy()
    s = x.T @ r
    p = s.copy()
    gamma = s @ s
    target = tol * np.sqrt(gamma)
    xnorm_f = np.linalg.norm(x)
    converged = gamma == 0.0
    itn = 0
    while not converged and itn < max_iter:
        itn += 1
        q = x @ p
        delta = q @ q
        # p numerically in the null space of x: further steps only add noise.
        if np.sqrt(delta) <= EPS * xnorm_f * np.linalg.norm(p):
            break
        step = gamma / delta
        w += step * p
        r -= step * q
        s = x.T @ r
        gamma_next = s @ s
        snorm = np.sqrt(gamma_next)
        if snorm <= target or snorm <= CGLS_FLOOR * EPS * xnorm_f * np.linalg.norm(r):
            converged = True
            break
        p = s + (gamma_next / gamma) * p
        gamma = gamma_next

    return LsSolution.from_solve(
        x, y, w, "cgls", iterations=itn, converged=converged, wall_time=time.perf_counter() - t0,
    )


def ridge(x, y, lam: float) -> LsSolution:
    """Ridge regression ``(X^T X + lam I) w = X^T y`` by Cholesky.

    For wide ``x`` with ``lam > 0`` the identical solution
    ``X^T (X X^T + lam I)^{-1} y`` is used so the factored matrix is m x m.
    ``lam = 0`` always factors ``X^T X`` and fails when it is singular.
    """
    x, y = check_system(x, y)
    if not lam >= 0:
        raise PreconditionError("lambda must be non-negative")
    m, n = x.shape
    t0 = time.perf_counter()
    if lam > 0 and n > m:
        alpha = cholesky_solve(x @ x.T + lam * np.eye(m), y)
        w = x.T @ alpha
        form = "dual"
    else:
        w = cholesky_solve(x.T @ x + lam * np.eye(n), x.T @ y)
        form = "primal"
    return LsSolution.from_solve(
        x, y, w, "ridge", wall_time=time.perf_counter() - t0, lam=float(lam), form=form,
    )


def pcr(x, y, k: int, svd=None) -> LsSolution:
    """Principal component regression on the top ``k`` singular directions.

    ``k`` above the numerical rank is clamped (``info['clamped']``). Pass a
    precomputed :class:`~matpoafd.linalg.SvdFactors` as ``svd`` to reuse it.
    """
    x, y = check_system(x, y)
    if k < 0:
        raise PreconditionError("k must be non-negative")
    t0 = time.perf_counter()
    f = svd if svd is not None else jacobi_svd(x)
    clamped = k > f.rank
    k = min(k, f.rank)
    coef = (f.u[:, :k].T @ y) / f.sigma[:k]
    w = f.v[:, :k] @ coef
    return LsSolution.from_solve(
        x, y, w, "pcr", iterations=k, wall_time=time.perf_counter() - t0, k=k, clamped=clamped,
    )


def soft_threshold(z, lam):
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


def lasso_cd(x, y, lam: float, tol: float = 1e-10, max_iter: int = 10000) -> LsSolution:
    """Cyclic coordinate descent for ``(1/2)||X w - y||^2 + lam ||w||_1``.

    Converged when every coordinate satisfies its subgradient condition
    within ``tol * max(1, max|X^T y|)``.
    """
    x, y = check_system(x, y)
    if not lam > 0:
        raise PreconditionError("lambda must be positive")
    col_sq = np.einsum("ij,ij->j", x, x)
    if np.any(col_sq == 0.0):
        raise PreconditionError("lasso_cd needs non-zero columns")
    t0 = time.perf_counter()
    n = x.shape[1]
    g0 = np.abs(x.T @ y).max()
    scale = max(1.0, float(g0))
    w = np.zeros(n)
    r = y.copy()
    converged = lam >= g0  # w = 0 already satisfies every subgradient condition
    sweep = 0
    while not converged and sweep < max_iter:
        sweep += 1
        for j in range(n):
            old = w[j]
            xj = x[:, j]
            new = soft_threshold(xj @ r + col_sq[j] * old, lam) / col_sq[j]
            if new != old:
                r -= (new - old) * xj
                w[j] = new
        r = y - x @ w
        g = x.T @ r
        zero = w == 0.0
        viol = np.where(zero, np.maximum(np.abs(g) - lam, 0.0), np.abs(g - lam * np.sign(w)))
        if viol.max() <= tol * scale:
            converged = True
            break
    return LsSolution.from_solve(
        x, y, w, "lasso",
        iterations=sweep, converged=converged, wall_time=time.perf_counter() - t0, lam=float(lam),
    )
