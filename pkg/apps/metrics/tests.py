import numpy as np
from django.test import SimpleTestCase, tag

from apps.collocation.exceptions import DimensionMismatch, InvalidArgument, PointOutsideDomain, TimeNotSampled
from apps.collocation.grid import Interval, UNIT_INTERVAL, chebyshev_gauss_lobatto, tensor_grid
from apps.oracles.exact import CaseParams, problem_factory
from apps.solver.problems import TimeConfig
from apps.solver.stepper import march

from .norms import (
    error_report, interpolate_snapshot, l2_error, linf_error, max_sum_drift, point_table,
    solution_error,
)


class NormTests(SimpleTestCase):

    def test_identical_vectors(self):
        u = np.array([0.3, -1.0, 2.0])
        self.assertEqual(l2_error(u, u), 0.0)
        self.assertEqual(linf_error(u, u), 0.0)

    def test_arithmetic(self):
        self.assertAlmostEqual(l2_error([0.0, 0.0], [3.0, 4.0]), np.sqrt(12.5), places=14)
        self.assertEqual(linf_error([0.0, 0.0], [3.0, -4.0]), 4.0)
        self.assertEqual(linf_error([1.5], [1.0]), 0.5)

    def test_constant_offset(self):
        computed = np.linspace(0.0, 1.0, 17)
        self.assertAlmostEqual(l2_error(computed + 1e-3, computed), 1e-3, delta=1e-12)

    def test_length_mismatch_and_empty(self):
        with self.assertRaises(DimensionMismatch):
            l2_error([1.0, 2.0], [1.0])
        with self.assertRaises(InvalidArgument):
            linf_error([], [])

    def test_symmetry_triangle_and_ordering(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a, b, c = rng.normal(size=(3, 13))
            for norm in (l2_error, linf_error):
                self.assertAlmostEqual(norm(a, b), norm(b, a), places=14)
                self.assertLessEqual(norm(a, c), norm(a, b) + norm(b, c) + 1e-14)
            self.assertLessEqual(l2_error(a, b), linf_error(a, b))

    def test_scaling(self):
        rng = np.random.default_rng(4)
        a, b = rng.normal(size=(2, 9))
        self.assertAlmostEqual(l2_error(3.0 * a, 3.0 * b), 3.0 * l2_error(a, b), places=12)
        self.assertAlmostEqual(linf_error(3.0 * a, 3.0 * b), 3.0 * linf_error(a, b), places=12)

    def test_report_summary(self):
        report = error_report([0.0, 0.0], [3.0, 4.0])
        self.assertEqual(report.as_summary(), {'l2': np.sqrt(12.5), 'linf': 4.0, 'n_points': 2})
        self.assertIsNone(report.pointwise)


class InterpolationTests(SimpleTestCase):

    def test_nodes_are_reproduced(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 9)
        values = np.cos(3.0 * grid.nodes)
        self.assertEqual(interpolate_snapshot(grid, values, grid.nodes[4]), values[4])

    def test_polynomials_are_exact_in_1d(self):
        grid = chebyshev_gauss_lobatto(Interval(-1.0, 2.0), 7)
        values = grid.nodes ** 5 - 2.0 * grid.nodes
        self.assertAlmostEqual(interpolate_snapshot(grid, values, 0.3), 0.3 ** 5 - 0.6, places=12)

    def test_tensor_interpolation_in_2d(self):
        grid = tensor_grid(chebyshev_gauss_lobatto(UNIT_INTERVAL, 6), chebyshev_gauss_lobatto(UNIT_INTERVAL, 5))
        X, Y = grid.coordinates()
        values = X ** 3 * Y ** 2 + Y
        self.assertAlmostEqual(interpolate_snapshot(grid, values, (0.25, 0.7)), 0.25 ** 3 * 0.49 + 0.7, places=12)

    def test_outside_domain(self):
        grid = chebyshev_gauss_lobatto(UNIT_INTERVAL, 5)
        with self.assertRaises(PointOutsideDomain):
            interpolate_snapshot(grid, np.zeros(5), 1.5)
        square = tensor_grid(grid, grid)
        with self.assertRaises(PointOutsideDomain):
            interpolate_snapshot(square, np.zeros(25), (0.5, -0.1))


class SolutionMetricTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        problem = problem_factory('1d-wood', CaseParams(sigma=2.0, nu=1.0, m_nodes=40))
        cls.solution = march(problem, TimeConfig(dt=1e-4, t_final=1e-3), sample_every=5)

    def test_point_table_at_midpoint(self):
        rows = point_table(self.solution, None, [0.5], 1e-3)
        self.assertEqual(len(rows), 1)
        self.assertAlmostEqual(rows[0].exact, 3.110739, delta=1e-6)
        self.assertAlmostEqual(rows[0].computed, 3.110739, delta=2e-5)
        self.assertEqual(rows[0].coords, (0.5,))

    def test_point_on_a_node_equals_the_snapshot(self):
        node = self.solution.grid.nodes[7]
        rows = point_table(self.solution, None, [node], 1e-3)
        self.assertEqual(rows[0].computed, self.solution.final_u[7])

    def test_unsampled_time(self):
        with self.assertRaises(TimeNotSampled):
            point_table(self.solution, None, [0.5], 3e-4)

    def test_final_error_report(self):
        report = solution_error(self.solution)
        self.assertEqual(report.n_points, 40)
        self.assertLessEqual(report.linf, 5e-5)
        self.assertLessEqual(report.l2, report.linf)

    def test_sum_drift_needs_coupled_solution(self):
        with self.assertRaises(InvalidArgument):
            max_sum_drift(self.solution)

    def test_v_component_needs_coupled_solution(self):
        with self.assertRaises(InvalidArgument):
            point_table(self.solution, None, [0.5], 1e-3, component='v')


class CoupledMetricTests(SimpleTestCase):

    def test_point_table_components_and_drift(self):
        problem = problem_factory('coupled', CaseParams(reynolds=10.0, m_nodes=8))
        solution = march(problem, TimeConfig(dt=1e-2, t_final=0.1))
        self.assertLessEqual(max_sum_drift(solution), 1e-9)
        u_rows = point_table(solution, None, [(0.5, 0.5)], 0.1, component='u')
        v_rows = point_table(solution, None, [(0.5, 0.5)], 0.1, component='v')
        self.assertAlmostEqual(u_rows[0].computed + v_rows[0].computed, 1.5, places=9)
        self.assertAlmostEqual(u_rows[0].exact + v_rows[0].exact, 1.5, places=14)
        self.assertLessEqual(u_rows[0].abs_error, 1e-3)


class ReferencePointTests(SimpleTestCase):

    def test_parabola_case_spot_checks(self):
        problem = problem_factory('1d-fourier', CaseParams(reynolds=100.0, m_nodes=80))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=0.6), sample_every=100)
        for x, t in ((0.5, 0.4), (0.75, 0.6)):
            row = point_table(solution, None, [x], t)[0]
            self.assertLessEqual(row.abs_error, 5e-6, (x, t))

    @tag('slow')
    def test_parabola_case_late_time(self):
        problem = problem_factory('1d-fourier', CaseParams(reynolds=100.0, m_nodes=80))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=3.0), sample_every=1000)
        row = point_table(solution, None, [0.25], 3.0)[0]
        self.assertAlmostEqual(row.computed, 0.07613, delta=5e-5)
        self.assertLessEqual(row.abs_error, 1e-6)

    @tag('slow')
    def test_2d_scalar_centre_point(self):
        problem = problem_factory('2d', CaseParams(reynolds=20.0, m_nodes=16))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=1.0), sample_every=500)
        row = point_table(solution, None, [(0.5, 0.5)], 1.0)[0]
        self.assertLessEqual(row.abs_error, 1e-5)

    @tag('slow')
    def test_coupled_published_points(self):
        problem = problem_factory('coupled', CaseParams(reynolds=100.0, m_nodes=20))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=2.0), sample_every=500)
        u = point_table(solution, None, [(0.5, 0.5)], 0.5, component='u')[0]
        v = point_table(solution, None, [(0.5, 0.5)], 0.5, component='v')[0]
        self.assertAlmostEqual(u.computed, 0.54332, delta=5e-4)
        self.assertAlmostEqual(v.computed, 0.95668, delta=5e-4)
        late = point_table(solution, None, [(0.1, 0.5)], 2.0, component='u')[0]
        self.assertAlmostEqual(late.computed, 0.55568, delta=5e-4)
        self.assertLessEqual(max_sum_drift(solution), 1e-9)
