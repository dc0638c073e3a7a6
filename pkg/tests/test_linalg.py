import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from matpoafd.exceptions import (
    ConvergenceError, DimensionError, FactorizationError, PreconditionError, SingularError,
)
from matpoafd.linalg import (
    as_matrix, as_vector, back_substitute, cholesky_solve, coproject, inner, jacobi_svd, null_space,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


class TestInner:
    @pytest.mark.parametrize("u,v,expected", [
        ((1, 0), (0, 1), 0.0),
        ((0.6, 0.8), (0.6, 0.8), 1.0),
        ((1, 2), (3, 4), 11.0),
    ])
    def test_examples(self, u, v, expected):
        assert inner(u, v) == pytest.approx(expected, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            inner([1, 2], [1, 2, 3])


class TestCoproject:
    def test_axis_projection(self):
        np.testing.assert_array_equal(coproject([3, 4], [1, 0]), [0, 4])

    def test_parallel(self):
        np.testing.assert_array_equal(coproject([1, 0], [1, 0]), [0, 0])

    def test_random_orthogonality(self, rng):
        for _ in range(50):
            v = rng.standard_normal(7)
            u = rng.standard_normal(7)
            u /= np.linalg.norm(u)
            q = coproject(v, u)
            assert abs(q @ u) <= 1e-12 * np.linalg.norm(v)
            assert q @ q == pytest.approx(v @ v - (v @ u) ** 2, rel=1e-10, abs=1e-14)

    def test_non_unit(self):
        with pytest.raises(PreconditionError):
            coproject([1, 2], [1, 1])

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, 5, elements=finite), arrays(np.float64, 5, elements=finite))
    def test_pythagoras_and_idempotence(self, v, u):
        nu = np.linalg.norm(u)
        if nu < 1e-3:
            return
        u = u / nu
        q = coproject(v, u)
        nv = np.linalg.norm(v)
        assert np.linalg.norm(q) <= nv * (1 + 1e-12) + 1e-300
        assert np.linalg.norm(coproject(q, u) - q) <= 1e-12 * nv + 1e-300


class TestBackSubstitute:
    def test_identity(self):
        np.testing.assert_allclose(back_substitute(np.eye(2), [5, 7]), [5, 7])

    def test_hand(self):
        np.testing.assert_allclose(back_substitute([[2, 1], [0, 3]], [4, 6]), [1, 2])

    def test_random_residual(self, rng):
        r = np.triu(rng.standard_normal((12, 12))) + 5 * np.eye(12)
        b = rng.standard_normal(12)
        x = back_substitute(r, b)
        assert np.linalg.norm(r @ x - b) <= 1e-10 * np.linalg.norm(b)

    def test_singular(self):
        with pytest.raises(SingularError):
            back_substitute([[1.0, 2.0], [0.0, 1e-16]], [1, 1])

    def test_shape(self):
        with pytest.raises(DimensionError):
            back_substitute(np.eye(2), [1, 2, 3])


class TestCholesky:
    def test_identity(self):
        np.testing.assert_allclose(cholesky_solve(np.eye(2), [2, 3]), [2, 3])

    def test_diagonal(self):
        np.testing.assert_allclose(cholesky_solve(np.diag([4.0, 9.0]), [8, 27]), [2, 3])

    def test_random_spd(self, rng):
        m = rng.standard_normal((9, 6))
        a = m.T @ m + np.eye(6)
        b = rng.standard_normal(6)
        assert np.linalg.norm(a @ cholesky_solve(a, b) - b) <= 1e-9 * np.linalg.norm(b)

    def test_not_spd(self):
        with pytest.raises(FactorizationError):
            cholesky_solve(np.diag([1.0, -1.0]), [1, 1])

    def test_not_symmetric(self):
        with pytest.raises(PreconditionError):
            cholesky_solve([[2.0, 1.0], [0.0, 2.0]], [1, 1])


class TestJacobiSvd:
    def test_diagonal(self):
        f = jacobi_svd(np.diag([3.0, 2.0]))
        np.testing.assert_allclose(f.sigma, [3, 2])
        np.testing.assert_allclose(np.abs(f.u), np.eye(2), atol=1e-15)
        np.testing.assert_allclose(np.abs(f.v), np.eye(2), atol=1e-15)

    def test_zero(self):
        f = jacobi_svd(np.zeros((2, 2)))
        assert f.rank == 0 and f.sigma.size == 0

    @pytest.mark.parametrize("shape", [(5, 3), (3, 5), (1, 4), (4, 1), (30, 30)])
    def test_reconstruction_and_orthonormality(self, rng, shape):
        a = rng.standard_normal(shape)
        f = jacobi_svd(a)
        assert np.all(f.sigma > 0) and np.all(np.diff(f.sigma) <= 0)
        r = f.rank
        np.testing.assert_allclose(f.u.T @ f.u, np.eye(r), atol=1e-10)
        np.testing.assert_allclose(f.v.T @ f.v, np.eye(r), atol=1e-10)
        assert np.abs(f.reconstruct() - a).max() <= 1e-9 * f.sigma[0]
        np.testing.assert_allclose(f.sigma, np.linalg.svd(a, compute_uv=False)[:r], rtol=1e-12)

    def test_rank_deficient(self, rng):
        a = rng.standard_normal((8, 4)) @ rng.standard_normal((4, 6))
        assert jacobi_svd(a).rank == 4

    def test_permutation_invariance(self, rng):
        a = rng.standard_normal((7, 5))
        s = jacobi_svd(a).sigma
        p = jacobi_svd(a[rng.permutation(7)][:, rng.permutation(5)]).sigma
        np.testing.assert_allclose(p, s, rtol=1e-9)

    def test_sweep_limit(self, rng):
        with pytest.raises(ConvergenceError):
            jacobi_svd(rng.standard_normal((6, 6)), max_sweeps=1)

    def test_null_space(self, rng):
        a = rng.standard_normal((3, 6))
        z = null_space(a)
        assert z.shape == (6, 3)
        assert np.abs(a @ z).max() <= 1e-12


class TestValidation:
    def test_rejects_nan(self):
        with pytest.raises(PreconditionError):
            as_matrix([[1.0, np.nan]])

    def test_vector_from_column(self):
        assert as_vector(np.ones((3, 1))).shape == (3,)

    def test_rejects_3d(self):
        with pytest.raises(DimensionError):
            as_matrix(np.zeros((2, 2, 2)))
