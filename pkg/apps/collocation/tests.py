import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from .dqm import (
    DqMatrix, apply_derivative, derivative_matrices, derivative_operators,
    first_derivative_matrix, higher_derivative_matrix, lift_to_2d,
)
from .exceptions import DegenerateGrid, DimensionMismatch, InvalidArgument
from .grid import Grid1D, Interval, chebyshev_gauss_lobatto, tensor_grid


UNIT = Interval(0.0, 1.0)


class IntervalTests(SimpleTestCase):

    def test_rejects_reversed_bounds(self):
        with self.assertRaises(InvalidArgument):
            Interval(1.0, 0.0)

    def test_rejects_non_finite_bounds(self):
        with self.assertRaises(InvalidArgument):
            Interval(0.0, float('inf'))

    def test_contains(self):
        self.assertTrue(UNIT.contains([0.0, 0.5, 1.0]))
        self.assertFalse(UNIT.contains(1.1))


class ChebyshevGridTests(SimpleTestCase):

    def test_two_nodes_are_the_endpoints(self):
        assert_array_equal(chebyshev_gauss_lobatto(UNIT, 2).nodes, [0.0, 1.0])

    def test_three_nodes_hit_the_midpoint(self):
        assert_allclose(chebyshev_gauss_lobatto(UNIT, 3).nodes, [0.0, 0.5, 1.0], atol=1e-15)

    def test_five_nodes_on_symmetric_interval(self):
        half = np.sqrt(2.0) / 2.0
        grid = chebyshev_gauss_lobatto(Interval(-1.0, 1.0), 5)
        assert_allclose(grid.nodes, [-1.0, -half, 0.0, half, 1.0], atol=1e-15)

    def test_rejects_fewer_than_two_nodes(self):
        with self.assertRaises(InvalidArgument):
            chebyshev_gauss_lobatto(UNIT, 1)

    def test_strictly_increasing_with_exact_endpoints(self):
        iv = Interval(-0.3, 2.7)
        for m_count in (2, 3, 7, 40, 131, 500):
            nodes = chebyshev_gauss_lobatto(iv, m_count).nodes
            self.assertTrue(np.all(np.diff(nodes) > 0), m_count)
            self.assertEqual(nodes[0], iv.lo)
            self.assertEqual(nodes[-1], iv.hi)

    def test_nodes_are_symmetric_about_the_midpoint(self):
        iv = Interval(2.0, 5.0)
        nodes = chebyshev_gauss_lobatto(iv, 33).nodes
        assert_allclose(nodes + nodes[::-1], iv.lo + iv.hi, rtol=1e-14)

    def test_affine_covariance(self):
        a, b = -2.0, 3.5
        unit_nodes = chebyshev_gauss_lobatto(UNIT, 21).nodes
        nodes = chebyshev_gauss_lobatto(Interval(a, b), 21).nodes
        assert_allclose(nodes, a + (b - a) * unit_nodes, rtol=1e-14, atol=1e-14)

    def test_nodes_are_read_only(self):
        grid = chebyshev_gauss_lobatto(UNIT, 4)
        with self.assertRaises(ValueError):
            grid.nodes[0] = 3.0


class TensorGridTests(SimpleTestCase):

    def test_x_major_flattening_order(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 2), chebyshev_gauss_lobatto(UNIT, 2))
        X, Y = grid.coordinates()
        assert_array_equal(X, [0.0, 0.0, 1.0, 1.0])
        assert_array_equal(Y, [0.0, 1.0, 0.0, 1.0])

    def test_flatten_formula(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 4), chebyshev_gauss_lobatto(UNIT, 3))
        self.assertEqual(grid.flatten(1, 0), 3)

    def test_flatten_and_unflatten_are_inverse(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 4), chebyshev_gauss_lobatto(UNIT, 5))
        for i in range(4):
            for j in range(5):
                self.assertEqual(grid.unflatten(grid.flatten(i, j)), (i, j))
        self.assertEqual(grid.size, 20)

    def test_boundary_and_interior_partition(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 5), chebyshev_gauss_lobatto(UNIT, 4))
        boundary = grid.boundary_indices()
        interior = grid.interior_indices()
        self.assertEqual(interior.size, 3 * 2)
        self.assertEqual(boundary.size + interior.size, grid.size)
        self.assertIn(grid.flatten(2, 0), boundary)
        self.assertIn(grid.flatten(1, 1), interior)


class FirstDerivativeMatrixTests(SimpleTestCase):

    def test_two_node_matrix_differentiates_the_linear_interpolant(self):
        a1 = first_derivative_matrix(chebyshev_gauss_lobatto(UNIT, 2))
        assert_allclose(a1.entries, [[-1.0, 1.0], [-1.0, 1.0]], atol=1e-15)

    def test_three_node_matrix(self):
        a1 = first_derivative_matrix(chebyshev_gauss_lobatto(Interval(-1.0, 1.0), 3))
        expected = [[-1.5, 2.0, -0.5], [-0.5, 0.0, 0.5], [0.5, -2.0, 1.5]]
        assert_allclose(a1.entries, expected, atol=1e-14)

    def test_duplicate_nodes_are_rejected(self):
        grid = Grid1D(interval=UNIT, nodes=[0.0, 0.5, 0.5, 1.0])
        with self.assertRaises(DegenerateGrid):
            first_derivative_matrix(grid)

    def test_row_sums_vanish(self):
        for m_count in (4, 8, 12, 20):
            a1, a2 = derivative_matrices(chebyshev_gauss_lobatto(UNIT, m_count))
            for mat in (a1.entries, a2.entries):
                bound = 1e-12 * m_count * np.abs(mat).sum(axis=1).max()
                self.assertLessEqual(np.abs(mat.sum(axis=1)).max(), bound)

    def test_polynomial_exactness_first_and_second_derivative(self):
        for m_count in (4, 8, 12, 20):
            grid = chebyshev_gauss_lobatto(UNIT, m_count)
            a1, a2 = derivative_matrices(grid)
            x = grid.nodes
            for k in range(m_count):
                exact_first = k * x ** (k - 1) if k >= 1 else np.zeros_like(x)
                exact_second = k * (k - 1) * x ** (k - 2) if k >= 2 else np.zeros_like(x)
                scale = max(1.0, np.abs(exact_first).max())
                assert_allclose(apply_derivative(a1, x ** k), exact_first,
                                atol=1e-9 * scale, err_msg=f"M={m_count}, k={k}")
                scale = max(1.0, np.abs(exact_second).max())
                assert_allclose(apply_derivative(a2, x ** k), exact_second,
                                atol=1e-6 * scale, err_msg=f"M={m_count}, k={k}")


class HigherDerivativeMatrixTests(SimpleTestCase):

    def setUp(self):
        self.grid = chebyshev_gauss_lobatto(Interval(-1.0, 1.0), 3)
        self.a1 = first_derivative_matrix(self.grid)

    def test_power_one_is_identity_operation(self):
        assert_array_equal(higher_derivative_matrix(self.a1, 1).entries, self.a1.entries)

    def test_second_derivative_middle_row(self):
        a2 = higher_derivative_matrix(self.a1, 2)
        assert_allclose(a2.entries[1], [1.0, -2.0, 1.0], atol=1e-14)
        self.assertEqual(a2.order, 2)

    def test_order_zero_rejected(self):
        with self.assertRaises(InvalidArgument):
            higher_derivative_matrix(self.a1, 0)

    def test_requires_first_order_input(self):
        a2 = higher_derivative_matrix(self.a1, 2)
        with self.assertRaises(InvalidArgument):
            higher_derivative_matrix(a2, 2)

    def test_second_derivative_of_square_is_two(self):
        grid = chebyshev_gauss_lobatto(Interval(0.0, 3.0), 9)
        a1, a2 = derivative_matrices(grid)
        assert_allclose(apply_derivative(a2, grid.nodes ** 2), 2.0, atol=1e-9)


class ApplyDerivativeTests(SimpleTestCase):

    def setUp(self):
        self.grid = chebyshev_gauss_lobatto(UNIT, 6)
        self.a1 = first_derivative_matrix(self.grid)

    def test_constant_maps_to_zero(self):
        assert_allclose(apply_derivative(self.a1, np.full(6, 4.2)), 0.0, atol=1e-10)

    def test_zero_maps_to_zero(self):
        assert_array_equal(apply_derivative(self.a1, np.zeros(6)), np.zeros(6))

    def test_cubic(self):
        x = self.grid.nodes
        assert_allclose(apply_derivative(self.a1, x ** 3), 3 * x ** 2, rtol=1e-9, atol=1e-12)

    def test_linearity(self):
        rng = np.random.default_rng(7)
        u, w = rng.normal(size=6), rng.normal(size=6)
        lhs = apply_derivative(self.a1, 2.5 * u - 0.75 * w)
        rhs = 2.5 * apply_derivative(self.a1, u) - 0.75 * apply_derivative(self.a1, w)
        assert_allclose(lhs, rhs, atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            apply_derivative(self.a1, np.zeros(5))

    def test_non_square_matrix_rejected(self):
        with self.assertRaises(DimensionMismatch):
            DqMatrix(entries=np.zeros((2, 3)), order=1)


class LiftTo2DTests(SimpleTestCase):

    def test_linear_polynomial_on_three_by_three(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 3), chebyshev_gauss_lobatto(UNIT, 3))
        ops = derivative_operators(grid)
        X, Y = grid.coordinates()
        u = X + 2 * Y
        assert_allclose(ops.dx1 @ u, 1.0, atol=1e-10)
        assert_allclose(ops.dy1 @ u, 2.0, atol=1e-10)

    def test_constants_are_annihilated(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 4), chebyshev_gauss_lobatto(UNIT, 5))
        ops = derivative_operators(grid)
        ones = np.ones(grid.size)
        for op in (ops.dx1, ops.dx2, ops.dy1, ops.dy2):
            assert_allclose(op @ ones, 0.0, atol=1e-10)

    def test_mixed_derivatives_commute(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT, 4), chebyshev_gauss_lobatto(UNIT, 4))
        ops = derivative_operators(grid)
        assert_allclose(ops.dx1 @ ops.dy1, ops.dy1 @ ops.dx1, atol=1e-9)

    def test_separable_polynomial_partials(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(Interval(0.0, 2.0), 6),
                           chebyshev_gauss_lobatto(Interval(-1.0, 1.0), 5))
        ops = derivative_operators(grid)
        X, Y = grid.coordinates()
        u = (X ** 3 - X) * (Y ** 4 + 2 * Y)
        assert_allclose(ops.dx1 @ u, (3 * X ** 2 - 1) * (Y ** 4 + 2 * Y), atol=1e-8)
        assert_allclose(ops.dy1 @ u, (X ** 3 - X) * (4 * Y ** 3 + 2), atol=1e-8)
        assert_allclose(ops.dx2 @ u, 6 * X * (Y ** 4 + 2 * Y), atol=1e-8)
        assert_allclose(ops.dy2 @ u, (X ** 3 - X) * 12 * Y ** 2, atol=1e-8)
        assert_allclose(ops.laplacian, ops.dx2 + ops.dy2)

    def test_size_mismatch(self):
        gx = chebyshev_gauss_lobatto(UNIT, 3)
        gy = chebyshev_gauss_lobatto(UNIT, 4)
        a1, a2 = derivative_matrices(gx)
        with self.assertRaises(DimensionMismatch):
            lift_to_2d(a1, a2, a1, a2, tensor_grid(gx, gy))
