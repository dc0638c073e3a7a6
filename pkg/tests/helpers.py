import numpy as np


def conditioned_matrix(rng, m, n, rank, log10_cond):
    """Random ``m x n`` matrix of exact rank ``rank`` with log-spaced singular values."""
    u, _ = np.linalg.qr(rng.standard_normal((m, rank)))
    v, _ = np.linalg.qr(rng.standard_normal((n, rank)))
    s = np.logspace(0.0, -log10_cond, rank) * rng.uniform(0.5, 5.0)
    return (u * s) @ v.T


def random_pinv_case(rng, max_dim=50, max_log_cond=6.0):
    """Tall, flat or square matrix with random rank and conditioning, plus a random rhs."""
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    rank = int(rng.integers(1, min(m, n) + 1))
    lc = float(rng.uniform(0.0, max_log_cond)) if rank > 1 else 0.0
    return conditioned_matrix(rng, m, n, rank, lc), rng.standard_normal(m), lc


def well_conditioned(rng, m, n, log10_cond=1.0):
    return conditioned_matrix(rng, m, n, min(m, n), log10_cond)

