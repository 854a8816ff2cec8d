import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from apps.collocation.exceptions import EvaluationError, InvalidArgument, MissingParameter
from apps.solver.stepper import initial_state

from .exact import (
    CaseId, CaseParams, FourierSeriesParams, case2_initial, exact_2d, exact_2d_edges,
    exact_coupled, fourier_coefficients, fourier_exact, problem_factory, wood_exact,
)

# u(x, 0.001) for sigma = 2 at nu = 1 and nu = 0.1, evaluated from the closed form.
WOOD_T_0001 = {
    0.1: (0.653544487, 0.065749759),
    0.3: (1.949363565, 0.196280868),
    0.5: (3.110738885, 0.313849356),
    0.7: (3.549595129, 0.359442860),
    0.9: (1.816660370, 0.184753743),
}


class WoodExactTests(SimpleTestCase):

    def test_zero_at_left_end(self):
        self.assertEqual(wood_exact(0.0, 0.3, 0.7, 5.0), 0.0)

    def test_midpoint_at_t0(self):
        self.assertAlmostEqual(wood_exact(0.5, 0.0, 1.0, 2.0), math.pi, places=12)

    def test_published_midpoint_value(self):
        self.assertAlmostEqual(wood_exact(0.5, 0.001, 1.0, 2.0), 3.110739, delta=1e-6)

    def test_profile_at_t_0001(self):
        for x, (re1, re10) in WOOD_T_0001.items():
            self.assertAlmostEqual(wood_exact(x, 0.001, 1.0, 2.0), re1, delta=1e-8)
            self.assertAlmostEqual(wood_exact(x, 0.001, 0.1, 2.0), re10, delta=1e-8)

    def test_vectorised(self):
        x = np.array([0.1, 0.5, 0.9])
        assert_allclose(wood_exact(x, 0.001, 1.0, 2.0), [0.653544487, 3.110738885, 1.816660370], atol=1e-8)

    def test_sigma_must_exceed_one(self):
        with self.assertRaises(InvalidArgument):
            wood_exact(0.5, 0.0, 1.0, 1.0)


class FourierSeriesTests(SimpleTestCase):

    def test_params_validation(self):
        with self.assertRaises(InvalidArgument):
            FourierSeriesParams(nu=0.01, quad_panels=3)
        with self.assertRaises(InvalidArgument):
            FourierSeriesParams(nu=0.01, n_terms=0)
        with self.assertRaises(InvalidArgument):
            FourierSeriesParams(nu=-1.0)

    def test_c0_tends_to_one_for_huge_viscosity(self):
        c0, _ = fourier_coefficients(FourierSeriesParams(nu=1e12, n_terms=4))
        self.assertAlmostEqual(c0, 1.0, delta=1e-9)

    def test_c0_reference_value(self):
        # exponent -x^2 (3 - 2x)
        c0, _ = fourier_coefficients(FourierSeriesParams(nu=1.0 / 3.0, n_terms=4))
        self.assertAlmostEqual(c0, 0.6435, delta=2e-3)

    def test_coefficients_decay(self):
        _, cn = fourier_coefficients(FourierSeriesParams(nu=0.01, n_terms=50))
        self.assertLess(abs(cn[-1]), 1e-3 * abs(cn[0]))

    def test_coefficients_are_cached_and_read_only(self):
        params = FourierSeriesParams(nu=0.05, n_terms=10)
        first = fourier_coefficients(params)
        self.assertIs(fourier_coefficients(FourierSeriesParams(nu=0.05, n_terms=10)), first)
        with self.assertRaises(ValueError):
            first[1][0] = 1.0

    def test_zero_at_the_ends(self):
        params = FourierSeriesParams(nu=0.01)
        assert_allclose(fourier_exact(np.array([0.0, 1.0]), 0.4, params), 0.0, atol=1e-12)

    def test_published_values(self):
        params = FourierSeriesParams(nu=0.01)
        self.assertAlmostEqual(fourier_exact(0.25, 0.4, params), 0.36226, delta=5e-5)
        self.assertAlmostEqual(fourier_exact(0.75, 1.0, params), 0.56932, delta=5e-5)

    def test_converged_under_doubling(self):
        params = FourierSeriesParams(nu=0.01)
        coarse = fourier_exact(0.5, 0.4, params)
        fine = fourier_exact(0.5, 0.4, params.doubled())
        self.assertLess(abs(coarse - fine), 1e-10)

    def test_needs_positive_time(self):
        with self.assertRaises(InvalidArgument):
            fourier_exact(0.5, 0.0, FourierSeriesParams(nu=0.01))

    def test_vanishing_denominator_is_an_evaluation_error(self):
        with self.assertRaises(EvaluationError):
            fourier_exact(np.linspace(0.0, 1.0, 11), 5.0, FourierSeriesParams(nu=1e-4))

    def test_case2_initial(self):
        self.assertEqual(case2_initial(0.0), 0.0)
        self.assertEqual(case2_initial(1.0), 0.0)
        self.assertEqual(case2_initial(0.5), 1.0)
        self.assertEqual(case2_initial(0.25), 0.75)


class LogisticSolutionTests(SimpleTestCase):

    def test_exact_2d_on_the_front(self):
        self.assertEqual(exact_2d(0.3, 0.2, 0.5, 80.0), 0.5)
        self.assertEqual(exact_2d(0.0, 0.0, 0.0, 7.0), 0.5)

    def test_exact_2d_value(self):
        self.assertAlmostEqual(exact_2d(0.875, 0.875, 1.0, 20.0), 1.0 / (1.0 + math.exp(7.5)), places=15)
        self.assertAlmostEqual(exact_2d(0.875, 0.875, 1.0, 20.0), 5.527786e-4, delta=1e-9)

    def test_exact_2d_huge_reynolds_stays_finite(self):
        values = exact_2d(np.array([0.9, 0.1]), 0.9, 0.0, 1e5)
        self.assertTrue(np.all(np.isfinite(values)))
        self.assertEqual(values[0], 0.0)

    def test_coupled_on_the_front(self):
        u, v = exact_coupled(0.2, 0.3, 0.4, 55.0)
        self.assertAlmostEqual(u, 0.625, places=15)
        self.assertAlmostEqual(v, 0.875, places=15)

    def test_coupled_published_values(self):
        u, v = exact_coupled(0.1, 0.1, 0.5, 100.0)
        self.assertAlmostEqual(u, 0.54332, delta=1e-5)
        self.assertAlmostEqual(v, 0.95668, delta=1e-5)
        u, _ = exact_coupled(0.1, 0.5, 2.0, 100.0)
        self.assertAlmostEqual(u, 0.555675, delta=1e-6)

    def test_coupled_sum_identity_on_random_samples(self):
        rng = np.random.default_rng(2024)
        x, y = rng.uniform(0.0, 1.0, (2, 10_000))
        t = rng.uniform(0.0, 5.0, 10_000)
        reynolds = 10.0 ** rng.uniform(-1.0, 5.0, 10_000)
        u, v = exact_coupled(x, y, t, reynolds)
        self.assertLessEqual(np.abs(u + v - 1.5).max(), 1e-14)

    def test_edges_restrict_the_exact_solution(self):
        edges = exact_2d_edges(20.0)
        self.assertAlmostEqual(edges['x_lo'](0.5, 0.0), 6.692851e-3, delta=1e-9)
        self.assertAlmostEqual(edges['y_hi'](0.4, 0.3), exact_2d(0.4, 1.0, 0.3, 20.0))


class ProblemFactoryTests(SimpleTestCase):

    def test_wood_initial_condition(self):
        problem = problem_factory('1d-wood', CaseParams(sigma=2.0, nu=1.0, m_nodes=9))
        self.assertAlmostEqual(problem.ic(0.5), math.pi, places=12)

    def test_wood_needs_sigma(self):
        with self.assertRaises(MissingParameter):
            problem_factory(CaseId.WOOD_1D, CaseParams(nu=1.0, m_nodes=9))

    def test_viscosity_needs_nu_or_reynolds(self):
        with self.assertRaises(MissingParameter):
            problem_factory('1d-zero', CaseParams(m_nodes=9))

    def test_reynolds_maps_to_inverse_viscosity(self):
        problem = problem_factory('1d-fourier', CaseParams(reynolds=100.0, m_nodes=9))
        self.assertAlmostEqual(problem.nu, 0.01)

    def test_inconsistent_nu_and_reynolds(self):
        with self.assertRaises(InvalidArgument):
            CaseParams(nu=0.1, reynolds=20.0).viscosity()

    def test_unknown_case(self):
        with self.assertRaises(InvalidArgument):
            problem_factory('3d', CaseParams(nu=1.0, m_nodes=5))

    def test_2d_boundary_value(self):
        problem = problem_factory('2d', CaseParams(reynolds=20.0, m_nodes=5))
        self.assertAlmostEqual(float(problem.bc(0.0, 0.5, 0.0)), 1.0 / (1.0 + math.exp(5.0)), places=14)
        self.assertAlmostEqual(problem.nu, 0.05)

    def test_coupled_initial_sum(self):
        problem = problem_factory('coupled', CaseParams(reynolds=100.0, mx=5, my=6))
        X, Y = problem.grid.coordinates()
        assert_allclose(problem.ic_u(X, Y) + problem.ic_v(X, Y), 1.5, atol=1e-15)

    def test_initial_data_agrees_with_exact_solution(self):
        cases = [
            ('1d-wood', CaseParams(sigma=100.0, reynolds=10.0, m_nodes=12)),
            ('2d', CaseParams(reynolds=100.0, m_nodes=7)),
            ('coupled', CaseParams(reynolds=100.0, m_nodes=7)),
        ]
        for case_id, params in cases:
            problem = problem_factory(case_id, params)
            u0, v0 = initial_state(problem)
            if case_id == '1d-wood':
                exact = problem.exact(problem.grid.nodes, 0.0)
                assert_allclose(u0, exact, atol=1e-12)
            elif case_id == '2d':
                X, Y = problem.grid.coordinates()
                assert_allclose(u0, problem.exact(X, Y, 0.0), atol=1e-12)
            else:
                X, Y = problem.grid.coordinates()
                exact_u, exact_v = problem.exact(X, Y, 0.0)
                assert_allclose(u0, exact_u, atol=1e-12)
                assert_allclose(v0, exact_v, atol=1e-12)

    def test_boundary_data_agrees_with_exact_solution(self):
        problem = problem_factory('2d', CaseParams(reynolds=50.0, m_nodes=6))
        X, Y = problem.grid.coordinates()
        idx = problem.grid.boundary_indices()
        for t in (0.0, 0.37, 1.5):
            assert_allclose(problem.bc(X[idx], Y[idx], t), exact_2d(X[idx], Y[idx], t, 50.0), atol=1e-12)

    def test_fourier_case_uses_parabola_at_t0(self):
        problem = problem_factory('1d-fourier', CaseParams(nu=0.01, m_nodes=9))
        assert_allclose(problem.exact(problem.grid.nodes, 0.0), case2_initial(problem.grid.nodes))
        self.assertEqual(problem.bc_left(1.0), 0.0)
