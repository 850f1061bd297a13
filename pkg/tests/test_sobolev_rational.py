"""
Unit tests for Sobolev rational least squares on the Jordan-like operator.
"""

import numpy as np
import pytest

from krylov_lsq.baselines import build_basis_matrix
from krylov_lsq.errors import PoleNodeCollision
from krylov_lsq.linalg import solve_dense_ls
from krylov_lsq.nodes import NodeSet, PoleSchedule, legendre_gauss, tapered_real_poles
from krylov_lsq.rational_arnoldi import eval_rational, fit_rational
from krylov_lsq.sobolev_poly import build_jordan, sobolev_weights
from krylov_lsq.sobolev_rational import eval_sobolev_rational, fit_sobolev_rational, sobolev_rational_basis


class TestFitSobolevRational:
    """Test fit_sobolev_rational and eval_sobolev_rational."""

    def test_reduces_to_plain_fit(self, rng):
        """Test zero orders reproduce fit_rational."""
        nodes = legendre_gauss(20, (0.0, 1.0))
        f = rng.standard_normal(20)
        poles = tapered_real_poles(6)
        plain, _ = fit_rational(nodes, f, poles)
        sobolev, _ = fit_sobolev_rational(nodes, f, poles)
        np.testing.assert_allclose(sobolev.y, plain.y, atol=1e-14)
        x = np.linspace(0.1, 0.9, 5)
        np.testing.assert_allclose(eval_sobolev_rational(sobolev, x, 0), eval_rational(plain, x), atol=1e-12)

    def test_constant(self):
        nodes = legendre_gauss(10, (0.0, 1.0)).with_orders([1, 0] * 5)
        f = nodes.stack_values(lambda t, i: np.full(t.shape, -1.5 if i == 0 else 0.0))
        model, _ = fit_sobolev_rational(nodes, f, tapered_real_poles(4))
        np.testing.assert_allclose(eval_sobolev_rational(model, [0.3, 0.8], 1), [0.0, -1.5, 0.0, -1.5], atol=1e-11)

    def test_single_pole_closed_form(self):
        """Test 1/(t - xi_1) is recovered with r'(x) = -1/(x - xi_1)^2."""
        poles = tapered_real_poles(3)
        xi = poles.poles[0]
        nodes = legendre_gauss(8, (0.0, 1.0)).with_orders([1, 2, 0, 1, 0, 1, 2, 0])
        f = nodes.stack_values(lambda t, i: [1 / (t - xi), -1 / (t - xi) ** 2, 2 / (t - xi) ** 3][i])
        model, _ = fit_sobolev_rational(nodes, f, poles)
        derivative, value = eval_sobolev_rational(model, [0.5], [1])
        assert value == pytest.approx(1 / (0.5 - xi), rel=1e-9)
        assert derivative == pytest.approx(-1 / (0.5 - xi) ** 2, rel=1e-9)

    def test_exact_recovery_at_nodes(self, rng):
        """Test data from the rational space with consistent derivatives is fitted exactly."""
        poles = PoleSchedule.from_poles([-0.5, -1.5, -4.0])
        xi = poles.poles
        parts = [lambda t: 1 + 2 / (t - xi[1]) - 1 / (t - xi[2]),
                 lambda t: -2 / (t - xi[1]) ** 2 + 1 / (t - xi[2]) ** 2]
        nodes = NodeSet(rng.uniform(0, 1, 6), np.ones(6), [1, 0, 1, 1, 0, 1])
        f = nodes.stack_values(lambda t, i: parts[i](t))
        model, _ = fit_sobolev_rational(nodes, f, poles)
        np.testing.assert_allclose(eval_sobolev_rational(model, nodes.z, nodes.orders), f, atol=1e-9)

    def test_matches_confluent_cauchy_solve(self, rng):
        """Test m = 9 with three poles against a direct weighted confluent Cauchy solve."""
        nodes = NodeSet([0.1, 0.45, 0.9], [1.0, 0.8, 1.2], [2, 2, 2])
        poles = PoleSchedule.from_poles([-0.4, -1.1, -2.5])
        f = rng.standard_normal(9)
        model, _ = fit_sobolev_rational(nodes, f, poles)
        basis = build_basis_matrix('confluent_cauchy', nodes, poles).matrix
        weights = sobolev_weights(nodes)
        c = solve_dense_ls(weights[:, None] * basis, weights * f)
        np.testing.assert_allclose(eval_sobolev_rational(model, nodes.z, nodes.orders), basis @ c, atol=1e-7)

    def test_pencil_relation(self, rng):
        """Test J Q K = Q H."""
        nodes = legendre_gauss(12, (0.0, 1.0)).with_orders(rng.integers(0, 3, 12))
        model, basis = fit_sobolev_rational(nodes, rng.standard_normal(nodes.dim), tapered_real_poles(8))
        op, _, _ = build_jordan(nodes)
        q = basis.matrix
        residual = op.matmat(q @ model.k.matrix) - q @ model.h.matrix
        scale = max(1.0, np.abs(model.h.matrix).max(), np.abs(model.k.matrix).max())
        assert np.abs(residual).max() <= 1e-11 * scale

    def test_sobolev_gram_identity(self, rng):
        """Test the evaluated derivatives are orthonormal in the weighted Sobolev inner product."""
        nodes = legendre_gauss(30, (0.0, 1.0)).with_orders(rng.integers(0, 2, 30))
        model, _ = fit_sobolev_rational(nodes, np.ones(nodes.dim), tapered_real_poles(10))
        values = sobolev_rational_basis(model, nodes.z, nodes.orders)
        weights = np.abs(sobolev_weights(nodes)) ** 2
        gram = (values.conj().T * weights) @ values
        np.testing.assert_allclose(gram, np.eye(11), atol=1e-8)

    def test_basis_is_matrix_rational_function(self, rng):
        """Test q_k = r_k(J) v with r_k(J) built densely from the pencil recurrence."""
        nodes = NodeSet([0.2, 0.5, 0.9], [1.0, 1.0, 1.0], [2, 0, 2])
        poles = PoleSchedule.from_poles([-0.3, -0.8, -1.4, -2.0])
        model, basis = fit_sobolev_rational(nodes, rng.standard_normal(7), poles)
        op, v, _ = build_jordan(nodes)
        jd = op.to_dense()
        h, k = model.h.matrix, model.k.matrix
        funcs = [model.r0 * np.eye(7)]
        for col in range(1, poles.n + 1):
            acc = sum(h[j, col - 1] * funcs[j] for j in range(col)) - jd @ sum(k[j, col - 1] * funcs[j]
                                                                              for j in range(col))
            funcs.append(np.linalg.solve(k[col, col - 1] * jd - h[col, col - 1] * np.eye(7), acc))
        columns = np.column_stack([r @ v for r in funcs])
        np.testing.assert_allclose(columns, basis.matrix, atol=1e-9)

    def test_derivative_matches_finite_differences(self):
        """Test r' agrees with central differences of r away from the poles."""
        nodes = legendre_gauss(40, (0.0, 1.0)).with_orders([1, 0] * 20)
        f = nodes.stack_values(lambda t, i: np.sqrt(t + 0.1) if i == 0 else 0.5 / np.sqrt(t + 0.1))
        model, _ = fit_sobolev_rational(nodes, f, tapered_real_poles(10))
        x = np.linspace(0.1, 0.95, 10)
        step = 1e-5
        derivative = eval_sobolev_rational(model, x, 1)[0::2]
        central = (eval_sobolev_rational(model, x + step, 0) - eval_sobolev_rational(model, x - step, 0)) / (2 * step)
        np.testing.assert_allclose(derivative, central, atol=1e-5)

    def test_pole_on_node(self):
        nodes = NodeSet([0.0, 0.5, 1.0], np.ones(3), [1, 0, 0])
        with pytest.raises(PoleNodeCollision):
            fit_sobolev_rational(nodes, [0.0, 1.0, 2.0, 3.0], PoleSchedule.from_poles([1.0]))

    def test_evaluation_at_pole(self):
        nodes = legendre_gauss(6, (0.0, 1.0)).with_orders([1] * 6)
        poles = PoleSchedule.from_poles([-0.5, -1.0])
        model, _ = fit_sobolev_rational(nodes, np.ones(12), poles)
        with pytest.raises(PoleNodeCollision):
            eval_sobolev_rational(model, [0.2, -1.0], 1)
