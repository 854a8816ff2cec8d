import numpy as np
from django.test import SimpleTestCase, tag
from numpy.testing import assert_allclose, assert_array_equal
from scipy.linalg import expm

from apps.collocation.dqm import derivative_matrices, derivative_operators
from apps.collocation.exceptions import (
    DimensionMismatch, Divergence, InvalidArgument, SingularMatrix, TimeNotSampled,
)
from apps.collocation.grid import UNIT_INTERVAL, chebyshev_gauss_lobatto, tensor_grid
from apps.oracles.exact import CaseParams, exact_coupled, problem_factory, wood_exact

from .problems import (
    BdfState, LinearSystem, Problem1D, Problem2D, ProblemCoupled, StartupScheme, TimeConfig,
)
from .stepper import (
    assemble_1d, assemble_2d, assemble_coupled, bdf1_startup, expected_sample_count,
    extrapolate, march, solve_linear,
)


def zero_problem_1d(m_count=5, nu=1.0, **kwargs):
    return Problem1D(
        grid=chebyshev_gauss_lobatto(UNIT_INTERVAL, m_count),
        nu=nu,
        ic=np.zeros_like,
        bc_left=lambda t: 0.0,
        bc_right=lambda t: 0.0,
        **kwargs,
    )


def constant_problem_2d(value, size=4, nu=0.5):
    grid = tensor_grid(chebyshev_gauss_lobatto(UNIT_INTERVAL, size),
                       chebyshev_gauss_lobatto(UNIT_INTERVAL, size))
    return Problem2D(
        grid=grid,
        nu=nu,
        ic=lambda x, y: np.full_like(x, value),
        bc=lambda x, y, t: np.full_like(x, value),
    )


def constant_coupled(a, b, size=4, reynolds=10.0):
    grid = tensor_grid(chebyshev_gauss_lobatto(UNIT_INTERVAL, size),
                       chebyshev_gauss_lobatto(UNIT_INTERVAL, size))
    return ProblemCoupled(
        grid=grid,
        reynolds=reynolds,
        ic_u=lambda x, y: np.full_like(x, a),
        ic_v=lambda x, y: np.full_like(x, b),
        bc_u=lambda x, y, t: np.full_like(x, a),
        bc_v=lambda x, y, t: np.full_like(x, b),
    )


class TimeConfigTests(SimpleTestCase):

    def test_step_count(self):
        self.assertEqual(TimeConfig(dt=1e-4, t_final=1e-3).n_steps, 10)
        self.assertEqual(TimeConfig(dt=4e-3, t_final=0.1).n_steps, 25)

    def test_dt_must_divide_t_final(self):
        with self.assertRaisesMessage(InvalidArgument, 't_final/dt must be a positive integer'):
            TimeConfig(dt=0.3, t_final=1.0)

    def test_non_positive_values_rejected(self):
        with self.assertRaises(InvalidArgument):
            TimeConfig(dt=0.0, t_final=1.0)
        with self.assertRaises(InvalidArgument):
            TimeConfig(dt=0.1, t_final=-1.0)

    def test_variable_steps_rejected(self):
        with self.assertRaises(InvalidArgument):
            TimeConfig(dt=0.1, t_final=1.0, step_ratio=0.5)

    def test_startup_coerced_from_string(self):
        self.assertIs(TimeConfig(dt=0.1, t_final=1.0, startup='explicit').startup, StartupScheme.EXPLICIT)
        with self.assertRaises(InvalidArgument):
            TimeConfig(dt=0.1, t_final=1.0, startup='leapfrog')


class ExtrapolateTests(SimpleTestCase):

    def test_constant_sequence(self):
        u = np.array([1.5, -2.0, 3.0])
        assert_allclose(extrapolate(u, u, 0.7), u)

    def test_unit_ratio(self):
        assert_allclose(extrapolate([2.0], [1.0], 1.0), [3.0])

    def test_half_ratio(self):
        assert_allclose(extrapolate([2.0], [1.0], 0.5), [2.5])

    def test_length_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            extrapolate([1.0, 2.0], [1.0], 1.0)


class Assemble1DTests(SimpleTestCase):

    def test_inviscid_zero_state_gives_identity(self):
        problem = zero_problem_1d(nu=0.0)
        a1, a2 = derivative_matrices(problem.grid)
        zeros = np.zeros(5)
        system = assemble_1d(problem, a1, a2, TimeConfig(dt=0.1, t_final=1.0),
                             BdfState(zeros, zeros, step_index=1, time=0.1))
        assert_array_equal(system.c, np.eye(5))
        assert_array_equal(system.f, zeros)

    def test_boundary_rows_are_unit_rows(self):
        problem = Problem1D(
            grid=chebyshev_gauss_lobatto(UNIT_INTERVAL, 6), nu=0.3, ic=np.sin,
            bc_left=lambda t: 10.0 + t, bc_right=lambda t: -t,
        )
        a1, a2 = derivative_matrices(problem.grid)
        rng = np.random.default_rng(3)
        state = BdfState(rng.normal(size=6), rng.normal(size=6), step_index=3, time=0.3)
        system = assemble_1d(problem, a1, a2, TimeConfig(dt=0.1, t_final=1.0), state)
        assert_array_equal(system.c[0], np.eye(6)[0])
        assert_array_equal(system.c[-1], np.eye(6)[-1])
        self.assertAlmostEqual(system.f[0], 10.4, places=12)
        self.assertAlmostEqual(system.f[-1], -0.4, places=12)

    def test_three_node_interior_row_by_hand(self):
        problem = zero_problem_1d(m_count=3, nu=1.0)
        a1, a2 = derivative_matrices(problem.grid)
        u = np.array([0.0, 0.5, 0.0])
        system = assemble_1d(problem, a1, a2, TimeConfig(dt=0.1, t_final=1.0),
                             BdfState(u, u, step_index=1, time=0.1))
        gamma = 2.0 / 30.0
        expected = np.eye(3)[1] - gamma * a2.entries[1] + gamma * 0.5 * a1.entries[1]
        assert_allclose(system.c[1], expected, atol=1e-14)
        # on [0, 1]: A row 1 = [-1, 0, 1], A^2 row 1 = [4, -8, 4]
        assert_allclose(system.c[1], [-0.3, 1.0 + 8.0 / 15.0, -3.5 / 15.0], atol=1e-13)
        assert_allclose(system.f, [0.0, 0.5, 0.0])

    def test_state_size_mismatch(self):
        problem = zero_problem_1d()
        a1, a2 = derivative_matrices(problem.grid)
        with self.assertRaises(DimensionMismatch):
            assemble_1d(problem, a1, a2, TimeConfig(dt=0.1, t_final=1.0),
                        BdfState(np.zeros(4), np.zeros(4), step_index=1, time=0.1))


class Assemble2DTests(SimpleTestCase):

    def test_inviscid_zero_state_gives_identity(self):
        problem = constant_problem_2d(0.0, nu=0.0)
        ops = derivative_operators(problem.grid)
        zeros = np.zeros(problem.grid.size)
        system = assemble_2d(problem, ops, TimeConfig(dt=0.1, t_final=1.0),
                             BdfState(zeros, zeros, step_index=1, time=0.1))
        assert_array_equal(system.c, np.eye(problem.grid.size))
        assert_array_equal(system.f, zeros)

    def test_constant_state_is_preserved(self):
        problem = constant_problem_2d(0.7)
        ops = derivative_operators(problem.grid)
        u = np.full(problem.grid.size, 0.7)
        system = assemble_2d(problem, ops, TimeConfig(dt=0.05, t_final=1.0),
                             BdfState(u, u, step_index=4, time=0.2))
        assert_allclose(solve_linear(system), 0.7, atol=1e-10)

    def test_three_by_three_interior_entry(self):
        problem = constant_problem_2d(0.0, size=3, nu=1.0)
        ops = derivative_operators(problem.grid)
        a1, a2 = derivative_matrices(problem.grid.gx)
        u = np.linspace(0.1, 0.9, 9)
        system = assemble_2d(problem, ops, TimeConfig(dt=0.01, t_final=1.0),
                             BdfState(u, u, step_index=1, time=0.01))
        gamma = 2.0 * 0.01 / 3.0
        k = problem.grid.flatten(1, 1)
        eye = np.eye(3)
        lap = np.kron(a2.entries, eye) + np.kron(eye, a2.entries)
        grad = np.kron(a1.entries, eye) + np.kron(eye, a1.entries)
        expected = np.eye(9)[k] - gamma * lap[k] + gamma * u[k] * grad[k]
        assert_allclose(system.c[k], expected, atol=1e-13)
        for b in problem.grid.boundary_indices():
            assert_array_equal(system.c[b], np.eye(9)[b])


class AssembleCoupledTests(SimpleTestCase):

    def test_zero_state_gives_identity(self):
        problem = constant_coupled(0.0, 0.0, reynolds=1e300)
        ops = derivative_operators(problem.grid)
        zeros = np.zeros(problem.grid.size)
        system = assemble_coupled(problem, ops, TimeConfig(dt=0.1, t_final=1.0),
                                  BdfState(zeros, zeros, 1, 0.1, v_prev=zeros, v_curr=zeros))
        assert_allclose(system.c, np.eye(problem.grid.size), atol=1e-290)
        assert_array_equal(system.f, zeros)
        assert_array_equal(system.g, zeros)

    def test_constants_are_preserved(self):
        problem = constant_coupled(0.3, -1.2)
        ops = derivative_operators(problem.grid)
        u = np.full(problem.grid.size, 0.3)
        v = np.full(problem.grid.size, -1.2)
        system = assemble_coupled(problem, ops, TimeConfig(dt=0.01, t_final=1.0),
                                  BdfState(u, u, 2, 0.02, v_prev=v, v_curr=v))
        u_next, v_next = solve_linear(system)
        assert_allclose(u_next, 0.3, atol=1e-10)
        assert_allclose(v_next, -1.2, atol=1e-10)

    def test_sum_is_conserved_with_travelling_wave_data(self):
        problem = problem_factory('coupled', CaseParams(reynolds=100.0, m_nodes=8))
        ops = derivative_operators(problem.grid)
        X, Y = problem.grid.coordinates()
        u_prev, v_prev = exact_coupled(X, Y, 0.0, 100.0)
        u_curr, v_curr = exact_coupled(X, Y, 0.01, 100.0)
        system = assemble_coupled(problem, ops, TimeConfig(dt=0.01, t_final=1.0),
                                  BdfState(u_prev, u_curr, 1, 0.01, v_prev=v_prev, v_curr=v_curr))
        u_next, v_next = solve_linear(system)
        assert_allclose(u_next + v_next, 1.5, atol=1e-9)

    def test_requires_v_state(self):
        problem = constant_coupled(0.0, 0.0)
        ops = derivative_operators(problem.grid)
        zeros = np.zeros(problem.grid.size)
        with self.assertRaises(DimensionMismatch):
            assemble_coupled(problem, ops, TimeConfig(dt=0.1, t_final=1.0),
                             BdfState(zeros, zeros, 1, 0.1))


class SolveLinearTests(SimpleTestCase):

    def test_identity(self):
        f = np.array([1.0, -2.0, 3.0])
        assert_allclose(solve_linear(LinearSystem(c=np.eye(3), f=f)), f)

    def test_diagonal(self):
        x = solve_linear(LinearSystem(c=[[2.0, 0.0], [0.0, 4.0]], f=[2.0, 8.0]))
        assert_allclose(x, [1.0, 2.0])

    def test_random_well_conditioned_residual(self):
        rng = np.random.default_rng(11)
        c = rng.normal(size=(10, 10)) + 10.0 * np.eye(10)
        f = rng.normal(size=10)
        x = solve_linear(LinearSystem(c=c, f=f))
        self.assertLessEqual(np.abs(c @ x - f).max(), 1e-10 * np.abs(f).max())

    def test_two_right_hand_sides_share_the_factorization(self):
        c = np.array([[4.0, 1.0], [2.0, 3.0]])
        x, y = solve_linear(LinearSystem(c=c, f=[1.0, 2.0], g=[0.0, 5.0]))
        assert_allclose(c @ x, [1.0, 2.0])
        assert_allclose(c @ y, [0.0, 5.0])

    def test_singular_matrix(self):
        with self.assertRaises(SingularMatrix):
            solve_linear(LinearSystem(c=[[1.0, 2.0], [2.0, 4.0]], f=[1.0, 1.0]))
        with self.assertRaises(SingularMatrix):
            solve_linear(LinearSystem(c=np.zeros((3, 3)), f=np.zeros(3)))

    def test_non_square_rejected(self):
        with self.assertRaises(DimensionMismatch):
            LinearSystem(c=np.zeros((2, 3)), f=np.zeros(2))


class Bdf1StartupTests(SimpleTestCase):

    def test_zero_data_stays_zero(self):
        problem = zero_problem_1d()
        u1 = bdf1_startup(problem, derivative_matrices(problem.grid),
                          TimeConfig(dt=0.1, t_final=1.0), np.zeros(5))
        assert_allclose(u1, 0.0, atol=1e-15)

    def test_inviscid_constant(self):
        problem = Problem1D(
            grid=chebyshev_gauss_lobatto(UNIT_INTERVAL, 7), nu=0.0,
            ic=lambda x: np.full_like(x, 2.5), bc_left=lambda t: 2.5, bc_right=lambda t: 2.5,
        )
        u1 = bdf1_startup(problem, derivative_matrices(problem.grid),
                          TimeConfig(dt=0.1, t_final=1.0), np.full(7, 2.5))
        assert_allclose(u1, 2.5, atol=1e-10)

    def test_heat_limit_against_matrix_exponential(self):
        dt = 1e-3
        problem = zero_problem_1d(m_count=6, nu=1.0, advection=0.0)
        a1, a2 = derivative_matrices(problem.grid)
        x = problem.grid.nodes
        u0 = np.sin(np.pi * x)
        u0[[0, -1]] = 0.0
        u1 = bdf1_startup(problem, (a1, a2), TimeConfig(dt=dt, t_final=0.1), u0)

        interior = problem.grid.interior_indices()
        lap = a2.entries[np.ix_(interior, interior)]
        reference = expm(dt * lap) @ u0[interior]
        bound = dt ** 2 * np.abs(lap @ lap @ u0[interior]).max()
        self.assertLessEqual(np.abs(u1[interior] - reference).max(), bound)
        assert_allclose(u1[[0, -1]], 0.0)

    def test_explicit_startup_is_the_forward_update(self):
        problem = problem_factory('1d-wood', CaseParams(sigma=2.0, nu=1.0, m_nodes=10))
        a1, a2 = derivative_matrices(problem.grid)
        u0 = wood_exact(problem.grid.nodes, 0.0, 1.0, 2.0)
        cfg = TimeConfig(dt=1e-4, t_final=1e-3, startup='explicit')
        u1 = bdf1_startup(problem, (a1, a2), cfg, u0)
        expected = u0 + 1e-4 * (a2.entries @ u0 - u0 * (a1.entries @ u0))
        assert_allclose(u1[1:-1], expected[1:-1], rtol=1e-12)
        self.assertAlmostEqual(u1[0], wood_exact(0.0, 1e-4, 1.0, 2.0))

    def test_coupled_startup_needs_v0(self):
        problem = constant_coupled(1.0, 1.0)
        ops = derivative_operators(problem.grid)
        with self.assertRaises(DimensionMismatch):
            bdf1_startup(problem, ops, TimeConfig(dt=0.1, t_final=1.0), np.ones(problem.grid.size))


class MarchTests(SimpleTestCase):

    def test_zero_problem_stays_zero(self):
        solution = march(zero_problem_1d(m_count=8, nu=0.2), TimeConfig(dt=0.01, t_final=0.1))
        self.assertEqual(solution.sample_count, 11)
        assert_allclose(solution.u, 0.0, atol=1e-14)

    def test_sample_count_includes_final_step(self):
        cfg = TimeConfig(dt=0.01, t_final=0.1)
        solution = march(zero_problem_1d(), cfg, sample_every=3)
        self.assertEqual(solution.sample_count, expected_sample_count(10, 3))
        self.assertEqual(solution.sample_count, 5)
        assert_allclose(solution.times, [0.0, 0.03, 0.06, 0.09, 0.1])

    def test_sample_every_must_be_positive(self):
        with self.assertRaises(InvalidArgument):
            march(zero_problem_1d(), TimeConfig(dt=0.01, t_final=0.1), sample_every=0)

    def test_snapshot_lookup(self):
        solution = march(zero_problem_1d(), TimeConfig(dt=0.01, t_final=0.1), sample_every=5)
        self.assertEqual(solution.snapshot_index(0.05), 1)
        with self.assertRaises(TimeNotSampled):
            solution.snapshot_index(0.03)

    def test_wood_case_matches_exact_solution(self):
        problem = problem_factory('1d-wood', CaseParams(sigma=2.0, nu=1.0, m_nodes=40))
        solution = march(problem, TimeConfig(dt=1e-4, t_final=1e-3))
        exact = wood_exact(problem.grid.nodes, 1e-3, 1.0, 2.0)
        self.assertLessEqual(np.abs(solution.final_u - exact).max(), 5e-5)

    def test_second_order_in_time(self):
        problem = problem_factory('1d-wood', CaseParams(sigma=2.0, nu=0.1, m_nodes=40))
        exact = wood_exact(problem.grid.nodes, 0.1, 0.1, 2.0)
        errors = []
        for dt in (4e-3, 2e-3):
            solution = march(problem, TimeConfig(dt=dt, t_final=0.1))
            errors.append(np.abs(solution.final_u - exact).max())
        ratio = errors[0] / errors[1]
        self.assertGreaterEqual(ratio, 3.0)
        self.assertLessEqual(ratio, 5.0)

    def test_constant_states_preserved_in_every_model(self):
        cfg = TimeConfig(dt=0.02, t_final=0.2)
        solution = march(constant_problem_2d(1.25, size=5), cfg)
        assert_allclose(solution.u, 1.25, atol=1e-9)
        solution = march(constant_coupled(0.4, 0.9, size=5), cfg)
        assert_allclose(solution.u, 0.4, atol=1e-9)
        assert_allclose(solution.v, 0.9, atol=1e-9)

    def test_coupled_sum_invariant_every_snapshot(self):
        problem = problem_factory('coupled', CaseParams(reynolds=100.0, m_nodes=10))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=0.05), sample_every=5)
        self.assertLessEqual(np.abs(solution.u + solution.v - 1.5).max(), 1e-9)

    def test_deterministic(self):
        problem = problem_factory('2d', CaseParams(reynolds=20.0, m_nodes=6))
        cfg = TimeConfig(dt=1e-2, t_final=0.1)
        first, second = march(problem, cfg), march(problem, cfg)
        assert_array_equal(first.u, second.u)
        assert_array_equal(first.times, second.times)

    def test_divergence_is_reported(self):
        problem = Problem1D(
            grid=chebyshev_gauss_lobatto(UNIT_INTERVAL, 5), nu=1.0, ic=np.zeros_like,
            bc_left=lambda t: np.nan if t > 0 else 0.0, bc_right=lambda t: 0.0,
        )
        with self.assertRaises(Divergence) as ctx:
            march(problem, TimeConfig(dt=0.1, t_final=1.0))
        self.assertEqual(ctx.exception.step, 1)
        self.assertIn('divergence', str(ctx.exception))

    def test_progress_callback(self):
        calls = []
        march(zero_problem_1d(), TimeConfig(dt=0.01, t_final=0.1),
              progress=lambda step, total: calls.append((step, total)), progress_every=4)
        self.assertEqual(calls, [(4, 10), (8, 10)])

    @tag('slow')
    def test_coupled_reference_run(self):
        problem = problem_factory('coupled', CaseParams(reynolds=100.0, m_nodes=20))
        solution = march(problem, TimeConfig(dt=1e-3, t_final=2.0), sample_every=100)
        self.assertLessEqual(np.abs(solution.u + solution.v - 1.5).max(), 1e-9)
        X, Y = problem.grid.coordinates()
        s = solution.snapshot_index(0.5)
        exact_u, exact_v = exact_coupled(X, Y, 0.5, 100.0)
        self.assertLessEqual(np.abs(solution.u[s] - exact_u).max(), 5e-3)
