import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from scipy.linalg import lu_factor
from scipy.optimize import linear_sum_assignment

from apps.collocation.dqm import derivative_matrices
from apps.collocation.exceptions import GridTooSmall, InvalidArgument
from apps.collocation.grid import UNIT_INTERVAL, chebyshev_gauss_lobatto, tensor_grid
from apps.oracles.exact import case2_initial, exact_coupled, wood_exact

from .spectra import (
    FrozenPolicy, OperatorKind, assemble_p_1d, assemble_r_coupled, assemble_weighting_block,
    spectrum, stability_sweep,
)


def square_grid(m_count):
    grid_1d = chebyshev_gauss_lobatto(UNIT_INTERVAL, m_count)
    return tensor_grid(grid_1d, grid_1d)


def matched_distance(a, b):
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


class AssemblePTests(SimpleTestCase):

    def test_zero_state_is_the_diffusion_block(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 8)
        _, a2 = derivative_matrices(grid)
        op = assemble_p_1d(grid, 0.4, np.zeros(8))
        assert_allclose(op.matrix, 0.4 * a2.interior_block())
        self.assertEqual(op.dimension, 6)
        self.assertIs(op.kind, OperatorKind.P_1D)

    def test_inviscid_zero_state_is_zero(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 6)
        report = spectrum(assemble_p_1d(grid, 0.0, np.zeros(6)))
        assert_allclose(report.eigenvalues, 0.0)
        self.assertTrue(report.verdict)

    def test_diffusion_block_is_stable(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 10)
        report = spectrum(assemble_p_1d(grid, 1.0, np.zeros(10)))
        self.assertLess(report.max_real_part, 0.0)

    def test_advection_row_scaling(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 6)
        a1, a2 = derivative_matrices(grid)
        u = np.linspace(0.0, 1.0, 6)
        op = assemble_p_1d(grid, 0.1, u, alpha=2.0)
        expected = -2.0 * np.diag(u[1:-1]) @ a1.interior_block() + 0.1 * a2.interior_block()
        assert_allclose(op.matrix, expected, atol=1e-12)

    def test_grid_too_small(self):
        with self.assertRaises(GridTooSmall):
            assemble_p_1d(chebyshev_gauss_lobatto(UNIT_INTERVAL, 3), 1.0, np.zeros(3))


class AssembleRTests(SimpleTestCase):

    def test_zero_state_is_pure_diffusion(self):
        grid = square_grid(6)
        op = assemble_r_coupled(grid, 50.0, np.zeros(36), np.zeros(36))
        self.assertEqual(op.dimension, 2 * 4 * 4)
        report = spectrum(op)
        scale = np.abs(op.matrix).sum(axis=1).max()
        self.assertLessEqual(np.abs(report.eigenvalues.imag).max(), 1e-8 * scale)
        self.assertLessEqual(report.max_real_part, 0.0)

    def test_infinite_reynolds_zero_state_is_zero(self):
        grid = square_grid(5)
        op = assemble_r_coupled(grid, math.inf, np.zeros(25), np.zeros(25))
        self.assertFalse(op.matrix.any())

    def test_blocks_are_identical(self):
        grid = square_grid(5)
        X, Y = grid.coordinates()
        u, v = exact_coupled(X, Y, 0.0, 100.0)
        op = assemble_r_coupled(grid, 100.0, u, v)
        half = op.dimension // 2
        assert_allclose(op.matrix[:half, :half], op.matrix[half:, half:])
        self.assertFalse(op.matrix[:half, half:].any())

    def test_travelling_wave_state_is_stable(self):
        grid = square_grid(10)
        X, Y = grid.coordinates()
        u, v = exact_coupled(X, Y, 0.0, 100.0)
        report = spectrum(assemble_r_coupled(grid, 100.0, u, v))
        self.assertEqual(report.eigenvalue_count, 2 * 8 * 8)
        self.assertTrue(report.verdict)

    def test_grid_too_small(self):
        with self.assertRaises(GridTooSmall):
            assemble_r_coupled(square_grid(3), 10.0, np.zeros(9), np.zeros(9))


class WeightingBlockTests(SimpleTestCase):

    def test_lifted_dimensions_and_kinds(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT_INTERVAL, 6), chebyshev_gauss_lobatto(UNIT_INTERVAL, 5))
        a_block = assemble_weighting_block(grid, order=2, direction='x')
        b_block = assemble_weighting_block(grid, order=1, direction='y')
        self.assertEqual(a_block.dimension, 4 * 3)
        self.assertIs(a_block.kind, OperatorKind.A_BLOCK)
        self.assertIs(b_block.kind, OperatorKind.B_BLOCK)

    def test_one_dimensional_block(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 7)
        _, a2 = derivative_matrices(grid)
        assert_allclose(assemble_weighting_block(grid, order=2).matrix, a2.interior_block())

    def test_bad_order(self):
        with self.assertRaises(InvalidArgument):
            assemble_weighting_block(square_grid(5), order=3)


class SpectrumTests(SimpleTestCase):

    def test_zero_matrix(self):
        report = spectrum(np.zeros((3, 3)))
        assert_allclose(report.eigenvalues, 0.0)
        self.assertTrue(report.verdict)

    def test_diagonal(self):
        report = spectrum(np.diag([-1.0, -2.0]))
        assert_allclose(np.sort(report.eigenvalues.real), [-2.0, -1.0])
        self.assertEqual(report.max_real_part, -1.0)

    def test_pure_rotation(self):
        report = spectrum(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert_allclose(np.sort(report.eigenvalues.imag), [-1.0, 1.0], atol=1e-14)
        self.assertAlmostEqual(report.max_real_part, 0.0, places=14)
        self.assertTrue(report.verdict)

    def test_unstable_matrix_fails_the_verdict(self):
        self.assertFalse(spectrum(np.diag([-3.0, 0.5])).verdict)

    def test_points(self):
        points = spectrum(np.diag([-1.0, -2.0])).points()
        self.assertEqual(points.shape, (2, 2))

    def test_non_finite_matrix_rejected(self):
        with self.assertRaises(InvalidArgument):
            spectrum(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class SpectrumInvariantTests(SimpleTestCase):

    def setUp(self):
        rng = np.random.default_rng(5)
        self.random = rng.normal(size=(12, 12))
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 12)
        self.operator = assemble_p_1d(grid, 0.05, 4.0 * grid.nodes * (1.0 - grid.nodes)).matrix
        self.rng = rng

    def test_conjugate_pairs(self):
        for matrix in (self.random, self.operator):
            values = spectrum(matrix).eigenvalues
            self.assertLessEqual(matched_distance(values, values.conj()), 1e-8 * np.abs(values).max())

    def test_trace_and_determinant(self):
        for matrix in (self.random, self.operator):
            values = spectrum(matrix).eigenvalues
            trace = np.trace(matrix)
            self.assertLessEqual(abs(values.sum().real - trace), 1e-6 * max(1.0, np.abs(values).sum()))
            lu, _ = lu_factor(matrix)
            det = np.prod(np.abs(np.diag(lu)))
            self.assertAlmostEqual(np.prod(np.abs(values)) / det, 1.0, delta=1e-4)

    def test_similarity_invariance(self):
        matrix = self.random[:10, :10]
        s = self.rng.normal(size=(10, 10)) + 5.0 * np.eye(10)
        transformed = np.linalg.solve(s, matrix @ s)
        a = spectrum(matrix).eigenvalues
        b = spectrum(transformed).eigenvalues
        self.assertLessEqual(matched_distance(a, b), 1e-6 * max(1.0, np.abs(a).max()))


class StabilitySweepTests(SimpleTestCase):

    def test_diffusion_sweep_is_stable(self):
        reports = stability_sweep('burgers1d', [10, 17, 24, 31], 1.0, frozen=FrozenPolicy.ZERO)
        self.assertEqual([r.size for r in reports], [10, 17, 24, 31])
        self.assertTrue(all(r.verdict for r in reports))

    def test_empty_sweep(self):
        self.assertEqual(stability_sweep('burgers1d', [], 1.0), [])

    def test_smallest_grid(self):
        reports = stability_sweep('burgers1d', [4], 1.0, frozen=FrozenPolicy.ZERO)
        self.assertEqual(reports[0].eigenvalue_count, 2)

    def test_coupled_sweep_dimensions(self):
        reports = stability_sweep('coupled', [8, 12], 100.0, frozen=FrozenPolicy.INITIAL)
        self.assertEqual([r.eigenvalue_count for r in reports], [2 * 36, 2 * 100])
        self.assertTrue(all(r.kind is OperatorKind.R_COUPLED for r in reports))

    def test_supplied_state(self):
        reports = stability_sweep('burgers1d', [6], 0.5, frozen='supplied', supplied=np.zeros_like)
        baseline = stability_sweep('burgers1d', [6], 0.5, frozen='zero')
        assert_allclose(np.sort_complex(reports[0].eigenvalues), np.sort_complex(baseline[0].eigenvalues))

    def test_supplied_policy_needs_a_function(self):
        with self.assertRaises(InvalidArgument):
            stability_sweep('burgers1d', [6], 0.5, frozen='supplied')

    def test_rejects_small_sizes_and_unknown_models(self):
        with self.assertRaises(GridTooSmall):
            stability_sweep('burgers1d', [3], 1.0)
        with self.assertRaises(InvalidArgument):
            stability_sweep('burgers3d', [6], 1.0)

    def test_weighting_block_sweep(self):
        reports = stability_sweep('weights-y', [5, 6], 0.0, order=2)
        self.assertEqual([r.eigenvalue_count for r in reports], [9, 16])
        self.assertTrue(all(r.kind is OperatorKind.B_BLOCK for r in reports))

    def test_default_freezes_at_the_initial_state(self):
        default = stability_sweep('coupled', [6], 100.0)[0]
        initial = stability_sweep('coupled', [6], 100.0, frozen='initial')[0]
        zero = stability_sweep('coupled', [6], 100.0, frozen='zero')[0]
        assert_allclose(np.sort_complex(default.eigenvalues), np.sort_complex(initial.eigenvalues))
        self.assertNotAlmostEqual(default.max_real_part, zero.max_real_part, places=6)

    def test_one_dimensional_initial_state_by_case(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 9)
        parabola = stability_sweep('burgers1d', [9], 0.1)[0]
        expected = spectrum(assemble_p_1d(grid, 0.1, case2_initial(grid.nodes)))
        assert_allclose(np.sort_complex(parabola.eigenvalues), np.sort_complex(expected.eigenvalues), atol=1e-10)

        wood = stability_sweep('burgers1d', [9], 0.1, case='1d-wood', sigma=2.0)[0]
        expected = spectrum(assemble_p_1d(grid, 0.1, wood_exact(grid.nodes, 0.0, 0.1, 2.0)))
        assert_allclose(np.sort_complex(wood.eigenvalues), np.sort_complex(expected.eigenvalues), atol=1e-10)

    def test_wood_initial_state_needs_sigma(self):
        with self.assertRaises(InvalidArgument):
            stability_sweep('burgers1d', [6], 0.1, case='1d-wood')
        with self.assertRaises(InvalidArgument):
            stability_sweep('burgers1d', [6], 0.1, case='coupled')
