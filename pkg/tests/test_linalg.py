"""
Unit tests for the dense kernels: Gram-Schmidt step, projection, least squares and rank.
"""

import mpmath
import numpy as np
import pytest

from krylov_lsq.errors import Breakdown, DimensionMismatch, InputError, RankDeficiency
from krylov_lsq.linalg import (Hessenberg, OrthoBasis, as_vector, numerical_rank, orthogonalize_next,
                               project_rhs, solve_dense_ls)


def _basis(*columns):
    return OrthoBasis(np.column_stack(columns).astype(np.complex128))


def _build(rng, m, n, passes):
    q = np.zeros((m, n), dtype=np.complex128)
    for k in range(n):
        candidate = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        q[:, k], _, _ = orthogonalize_next(candidate, OrthoBasis(q[:, :k]), passes)
    return OrthoBasis(q)


class TestOrthogonalizeNext:
    """Test one Gram-Schmidt step."""

    def test_already_orthogonal(self):
        """Test a candidate orthogonal to the basis is returned unchanged."""
        e1, e2 = np.eye(3)[:, 0], np.eye(3)[:, 1]
        unit, coeffs, tail = orthogonalize_next(e1, _basis(e2), 1)
        np.testing.assert_allclose(unit, e1)
        np.testing.assert_allclose(coeffs, [0])
        assert tail == pytest.approx(1.0)

    def test_dependent_candidate_breaks_down(self):
        """Test a candidate inside the span raises Breakdown."""
        e2 = np.eye(3)[:, 1]
        with pytest.raises(Breakdown) as info:
            orthogonalize_next(e2, _basis(e2), 2, step=4)
        assert info.value.step == 4
        assert info.value.tail_norm == 0.0

    def test_hand_computed_step(self):
        """Test [1,1,0] against e1 gives coefficient 1 and unit vector e2."""
        unit, coeffs, tail = orthogonalize_next([1, 1, 0], _basis(np.eye(3)[:, 0]), 2)
        np.testing.assert_allclose(coeffs, [1])
        assert tail == pytest.approx(1.0)
        np.testing.assert_allclose(unit, [0, 1, 0])

    def test_empty_basis_normalizes(self):
        """Test an empty basis only normalizes the candidate."""
        unit, coeffs, tail = orthogonalize_next([3, 4], OrthoBasis(np.zeros((2, 0), dtype=complex)), 1)
        np.testing.assert_allclose(unit, [0.6, 0.8])
        assert coeffs.shape == (0,)
        assert tail == pytest.approx(5.0)

    def test_invalid_pass_count(self):
        """Test only 1 or 2 passes are accepted."""
        with pytest.raises(InputError):
            orthogonalize_next([1, 0], _basis(np.array([0, 1])), 3)

    def test_length_mismatch(self):
        """Test a candidate of the wrong length is rejected."""
        with pytest.raises(DimensionMismatch):
            orthogonalize_next([1, 0, 0], _basis(np.array([0, 1])), 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_two_passes_orthonormal(self, seed):
        """Test twice is enough: a 2000 x 240 basis is orthonormal to 1e-12."""
        basis = _build(np.random.default_rng(seed), 2000, 240, 2)
        assert basis.orthogonality_error() <= 1e-12

    def test_second_pass_never_worse(self):
        """Test two passes give an orthogonality error no larger than one pass."""
        m, n = 300, 60
        # Arnoldi on a real grid loses orthogonality with a single pass
        z = np.linspace(-1, 1, m)
        errors = {}
        for passes in (1, 2):
            q = np.zeros((m, n), dtype=np.complex128)
            q[:, 0] = 1 / np.sqrt(m)
            for k in range(1, n):
                q[:, k], _, _ = orthogonalize_next(z * q[:, k - 1], OrthoBasis(q[:, :k]), passes)
            errors[passes] = OrthoBasis(q).orthogonality_error()
        assert errors[2] <= errors[1]


class TestProjectRhs:
    """Test y = Q^H diag(w) f."""

    def test_identity(self):
        """Test Q = I returns the weighted data."""
        q = OrthoBasis(np.eye(3, dtype=complex))
        np.testing.assert_allclose(project_rhs(q, [1, 1, 1], [1, 2, 3]), [1, 2, 3])
        np.testing.assert_allclose(project_rhs(q, [2, 0, 1], [1, 1, 1]), [2, 0, 1])

    def test_matches_triple_loop(self, rng):
        """Test against an explicit loop."""
        q = _build(rng, 6, 3, 2).matrix
        w = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        f = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        expected = [sum(np.conj(q[j, k]) * w[j] * f[j] for j in range(6)) for k in range(3)]
        np.testing.assert_allclose(project_rhs(OrthoBasis(q), w, f), expected, atol=1e-14)

    def test_dimension_mismatch(self):
        """Test mismatched lengths are rejected."""
        with pytest.raises(DimensionMismatch):
            project_rhs(OrthoBasis(np.eye(3, dtype=complex)), [1, 1], [1, 1, 1])


class TestSolveDenseLS:
    """Test the Householder least squares solve."""

    def test_identity(self):
        """Test A = I returns b."""
        np.testing.assert_allclose(solve_dense_ls(np.eye(2), [3, 4]), [3, 4])

    def test_mean(self):
        """Test a single ones column gives the mean."""
        np.testing.assert_allclose(solve_dense_ls([[1], [1]], [0, 2]), [1])

    def test_extended_precision_oracle(self, rng):
        """Test a random 8 x 3 system against 50-digit normal equations."""
        a = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        with mpmath.workdps(50):
            ma = mpmath.matrix([[mpmath.mpc(x.real, x.imag) for x in row] for row in a])
            mb = mpmath.matrix([mpmath.mpc(x.real, x.imag) for x in b])
            c = mpmath.lu_solve(ma.H * ma, ma.H * mb)
            expected = np.array([complex(c[i]) for i in range(3)])
        np.testing.assert_allclose(solve_dense_ls(a, b), expected, rtol=1e-12)

    def test_residual_orthogonal_to_columns(self, rng):
        """Test A^H (A c - b) vanishes for a well-conditioned A."""
        a = rng.standard_normal((20, 5))
        b = rng.standard_normal(20)
        c = solve_dense_ls(a, b)
        residual = a.conj().T @ (a @ c - b)
        assert np.linalg.norm(residual) <= 1e-10 * np.linalg.norm(a) * np.linalg.norm(b)

    def test_rank_deficient_carries_solution(self):
        """Test repeated columns raise RankDeficiency with the solution attached."""
        with pytest.raises(RankDeficiency) as info:
            solve_dense_ls(np.ones((3, 2)), [1, 2, 3])
        assert info.value.solution.shape == (2,)
        assert info.value.pivot_ratio < 1e-14

    def test_underdetermined_rejected(self):
        """Test more columns than rows is an input error."""
        with pytest.raises(InputError):
            solve_dense_ls(np.ones((2, 3)), [1, 2])


class TestNumericalRank:
    """Test singular-value based rank."""

    def test_zero(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_identity(self):
        assert numerical_rank(np.eye(3)) == 3

    def test_outer_product(self, rng):
        """Test an outer product has rank 1."""
        u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert numerical_rank(np.outer(u, v)) == 1


class TestContainers:
    """Test validation of vectors and Hessenberg matrices."""

    def test_non_finite_vector(self):
        with pytest.raises(InputError):
            as_vector([1.0, np.nan])

    def test_hessenberg_shape(self):
        """Test only (n+1) x n matrices are accepted."""
        with pytest.raises(InputError):
            Hessenberg(np.zeros((3, 3)))

    def test_hessenberg_lower_part(self):
        """Test entries below the subdiagonal must vanish."""
        h = np.zeros((3, 2))
        h[2, 0] = 1.0
        with pytest.raises(InputError):
            Hessenberg(h)

    def test_hessenberg_subdiagonal(self):
        h = np.array([[1.0, 2.0], [3.0, 4.0], [0.0, 5.0]])
        np.testing.assert_allclose(Hessenberg(h).subdiagonal(), [3.0, 5.0])
