"""
Unit tests for node sets, quadrature rules and pole schedules.
"""

import math

import numpy as np
import pytest

from krylov_lsq.errors import DuplicateNodes, InputError
from krylov_lsq.nodes import (NodeSet, PoleSchedule, chebyshev_first_kind, clustered_nodes, conjugate_pair_poles,
                              legendre_gauss, tapered_real_poles)


class TestNodeSet:
    """Test NodeSet validation and layout."""

    def test_dimension_counts_derivatives(self):
        """Test m = sigma + sum(s_j)."""
        nodes = NodeSet([0.0, 1.0, 2.0], [1, 1, 1], [2, 0, 1])
        assert nodes.size == 3
        assert nodes.dim == 6
        assert nodes.max_order == 2
        assert not nodes.is_plain()

    def test_duplicate_nodes(self):
        with pytest.raises(DuplicateNodes):
            NodeSet([0.5, 0.5], [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            NodeSet([0.0, 1.0], [1.0])

    def test_zero_alpha_rejected(self):
        """Test Jordan alphas must be non-zero."""
        with pytest.raises(InputError):
            NodeSet([0.0], [1.0], [2], alphas=[[1.0, 0.0]])

    def test_alpha_count_checked(self):
        with pytest.raises(InputError):
            NodeSet([0.0], [1.0], [2], alphas=[[1.0]])

    def test_stack_values_highest_first(self):
        """Test data blocks run from the highest derivative down to the value."""
        nodes = NodeSet([2.0, 3.0], [1, 1], [1, 0])
        f = nodes.stack_values(lambda t, i: t ** 2 if i == 0 else 2 * t)
        np.testing.assert_allclose(f, [4.0, 4.0, 9.0])

    def test_min_gap(self):
        assert NodeSet([0.0, 0.25, 1.0], [1, 1, 1]).min_gap() == pytest.approx(0.25)


class TestChebyshev:
    """Test first-kind Chebyshev-Gauss nodes."""

    def test_single_node(self):
        """Test sigma = 1 gives z = 0 and w = sqrt(pi)."""
        nodes = chebyshev_first_kind(1)
        assert nodes.z[0] == 0
        assert nodes.w[0] == pytest.approx(math.sqrt(math.pi))

    def test_two_nodes(self):
        nodes = chebyshev_first_kind(2)
        np.testing.assert_allclose(nodes.z.real, [math.sqrt(2) / 2, -math.sqrt(2) / 2], atol=1e-15)
        np.testing.assert_allclose(nodes.w.real, [math.sqrt(math.pi / 2)] * 2)

    def test_weights_sum_to_pi(self):
        assert np.sum(np.abs(chebyshev_first_kind(5).w) ** 2) == pytest.approx(math.pi, abs=1e-15)

    def test_exactness(self):
        """Test the rule integrates t^8 / sqrt(1 - t^2) exactly with 5 nodes."""
        nodes = chebyshev_first_kind(5)
        integral = np.sum(np.abs(nodes.w) ** 2 * nodes.z.real ** 8)
        # int t^8 / sqrt(1-t^2) = pi * 35/128
        assert integral == pytest.approx(math.pi * 35 / 128, abs=1e-13)

    def test_general_interval(self):
        """Test nodes are mapped affinely and weights scaled by (b - a)/2."""
        nodes = chebyshev_first_kind(7, (0.0, 2.0))
        assert np.all((nodes.z.real > 0) & (nodes.z.real < 2))
        assert np.sum(np.abs(nodes.w) ** 2) == pytest.approx(math.pi, abs=1e-14)

    def test_invalid_sigma(self):
        with pytest.raises(InputError):
            chebyshev_first_kind(0)


class TestLegendre:
    """Test Legendre-Gauss nodes."""

    def test_midpoint(self):
        nodes = legendre_gauss(1)
        assert abs(nodes.z[0]) < 1e-15
        assert abs(nodes.w[0]) ** 2 == pytest.approx(2.0)

    def test_two_point_rule(self):
        nodes = legendre_gauss(2)
        np.testing.assert_allclose(nodes.z.real, [1 / math.sqrt(3), -1 / math.sqrt(3)], atol=1e-15)
        np.testing.assert_allclose(np.abs(nodes.w) ** 2, [1.0, 1.0], atol=1e-14)

    def test_exactness(self):
        """Test 8 nodes integrate t^4 to 2/5."""
        nodes = legendre_gauss(8)
        assert np.sum(np.abs(nodes.w) ** 2 * nodes.z.real ** 4) == pytest.approx(0.4, abs=1e-14)

    def test_high_degree_exactness(self):
        """Test 20 nodes integrate t^38 exactly."""
        nodes = legendre_gauss(20)
        assert np.sum(np.abs(nodes.w) ** 2 * nodes.z.real ** 38) == pytest.approx(2 / 39, abs=1e-13)

    def test_large_rule(self):
        """Test a 481-node rule has distinct nodes and total weight 2."""
        nodes = legendre_gauss(481)
        assert nodes.min_gap() > 0
        assert np.sum(np.abs(nodes.w) ** 2) == pytest.approx(2.0, abs=1e-12)

    def test_unit_interval(self):
        nodes = legendre_gauss(6, (0.0, 1.0))
        assert np.sum(np.abs(nodes.w) ** 2 * nodes.z.real ** 3) == pytest.approx(0.25, abs=1e-14)


class TestClusteredNodes:
    """Test exponentially clustered nodes."""

    def test_last_node_is_one(self):
        assert clustered_nodes(4).z[-1] == pytest.approx(1.0)

    def test_first_node(self):
        assert clustered_nodes(4).z[0].real == pytest.approx(math.exp(-math.sqrt(2) * math.pi), rel=1e-14)

    def test_symmetric_interval(self):
        """Test 2000 nodes on [-1,1] are 1000 mirrored pairs without zero."""
        nodes = clustered_nodes(2000, '[-1,1]')
        assert nodes.size == 2000
        assert np.count_nonzero(nodes.z.real > 0) == 1000
        np.testing.assert_allclose(np.sort(nodes.z.real), np.sort(-nodes.z.real))
        assert np.all(nodes.z != 0)
        assert np.all(nodes.w == 1)

    def test_injected_law(self):
        """Test an alternative clustering law can be passed in."""
        nodes = clustered_nodes(5, law=lambda j, count: j / count)
        np.testing.assert_allclose(nodes.z.real, [0.2, 0.4, 0.6, 0.8, 1.0])

    def test_unknown_interval(self):
        with pytest.raises(InputError):
            clustered_nodes(10, '[0,2]')

    def test_odd_count_on_symmetric_interval(self):
        """Test an odd count on [-1,1] is rejected instead of losing a node."""
        with pytest.raises(InputError):
            clustered_nodes(5, '[-1,1]')


class TestPoleSchedules:
    """Test pole and shift schedules."""

    def test_single_tapered_pole(self):
        assert tapered_real_poles(1).poles[0] == pytest.approx(-2.0)

    def test_tapered_first_pole(self):
        assert tapered_real_poles(4).poles[0].real == pytest.approx(-2 * math.exp(-math.sqrt(2) * math.pi))

    def test_default_shifts(self):
        """Test shifts are infinity followed by the previous poles."""
        schedule = tapered_real_poles(5)
        assert np.isinf(schedule.shifts[0])
        np.testing.assert_allclose(schedule.shifts[1:], schedule.poles[:-1])
        assert schedule.eta[0] == 0

    def test_conjugate_pair(self):
        """Test n = 2 gives +-i sqrt(2)."""
        np.testing.assert_allclose(conjugate_pair_poles(2).poles, [1j * math.sqrt(2), -1j * math.sqrt(2)])

    def test_conjugate_radius(self):
        poles = conjugate_pair_poles(4).poles
        expected = math.sqrt(2 * math.exp(-math.sqrt(2) * math.pi * (math.sqrt(2) - 1)))
        assert abs(poles[0]) == pytest.approx(expected)

    def test_conjugate_closed_under_conjugation(self):
        poles = conjugate_pair_poles(10).poles
        np.testing.assert_allclose(poles[1::2], np.conj(poles[0::2]))
        assert np.all(poles.real == 0)

    def test_conjugate_needs_even_count(self):
        with pytest.raises(InputError):
            conjugate_pair_poles(3)

    def test_pole_equal_to_shift(self):
        """Test a repeated pole collides with its own shift."""
        with pytest.raises(InputError):
            PoleSchedule.from_poles([1.0, 1.0])

    def test_infinite_pole(self):
        """Test a pole at infinity is encoded with nu = 0."""
        schedule = PoleSchedule.from_poles([2.0, complex('inf')])
        assert schedule.nu[1] == 0
        np.testing.assert_allclose(schedule.finite_poles(), [2.0])

    def test_zero_over_zero(self):
        with pytest.raises(InputError):
            PoleSchedule([0.0], [0.0], [1.0], [0.0])

    def test_poles_miss_experiment_nodes(self):
        """Test generated poles stay away from the matching node sets."""
        assert tapered_real_poles(120).min_distance_to(clustered_nodes(2000).z) > 0
        assert conjugate_pair_poles(60).min_distance_to(clustered_nodes(2000, '[-1,1]').z) > 0
