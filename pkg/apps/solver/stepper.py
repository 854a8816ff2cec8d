# apps/solver/stepper.py
"""
Linearly implicit BDF2 marching for the three Burgers' models.

Each step solves one dense linear system

    [I - (2/3) dt nu D2 + (2/3) dt diag(w) D1] u^{n+1} = (4/3) u^n - (1/3) u^{n-1}

with w = 2u^n - u^{n-1}, followed by Dirichlet enforcement on the boundary
rows. The first step (n = 0 -> 1) uses BDF1 with the advection coefficient
frozen at u^0.
"""

import logging
import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from apps.collocation.dqm import DqMatrix, Operator2D, derivative_matrices, derivative_operators
from apps.collocation.exceptions import (
    DimensionMismatch, Divergence, InvalidArgument, ResidualTooLarge, SingularMatrix,
)

from .problems import BdfState, LinearSystem, Model, Solution, StartupScheme

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-13
RESIDUAL_TOLERANCE = 1e-8


# ============================================================================
# HELPERS
# ============================================================================

def extrapolate(u_curr, u_prev, ratio=1.0):
    """w^{n+1} = (1 + r) u^n - r u^{n-1}."""
    u_curr = np.asarray(u_curr, dtype=float)
    u_prev = np.asarray(u_prev, dtype=float)
    if u_curr.shape != u_prev.shape:
        raise DimensionMismatch(f"cannot extrapolate {u_curr.shape} against {u_prev.shape}")
    return (1.0 + ratio) * u_curr - ratio * u_prev


def _sample(func, size, *coords):
    values = np.asarray(func(*coords), dtype=float)
    try:
        return np.broadcast_to(values, (size,)).copy()
    except ValueError:
        raise DimensionMismatch(f"data function returned shape {values.shape}, expected ({size},)") from None


def _boundary_values(problem, t, component='u'):
    """Dirichlet data at time t on the boundary nodes, as (indices, values)."""
    if problem.model is Model.BURGERS_1D:
        m_count = problem.grid.m_count
        values = np.array([problem.bc_left(t), problem.bc_right(t)], dtype=float)
        return np.array([0, m_count - 1]), values

    grid = problem.grid
    idx = grid.boundary_indices()
    X, Y = grid.coordinates()
    if problem.model is Model.BURGERS_2D:
        func = problem.bc
    else:
        func = problem.bc_u if component == 'u' else problem.bc_v
    return idx, _sample(func, idx.size, X[idx], Y[idx], t)


def _enforce_dirichlet(c, idx, rhs_pairs):
    """Overwrite boundary rows of C with unit rows and load the BC values into each RHS."""
    c[idx, :] = 0.0
    c[idx, idx] = 1.0
    for rhs, values in rhs_pairs:
        rhs[idx] = values


def _implicit_matrix(d2, nu, gamma, advection_terms):
    """I - gamma nu D2 + gamma * sum_k diag(w_k) D1_k."""
    c = np.eye(d2.shape[0]) - (gamma * nu) * d2
    for w, d1 in advection_terms:
        c += gamma * (w[:, None] * d1)
    return c


def _check_1d_matrices(problem, a1, a2):
    m_count = problem.grid.m_count
    for name, mat in (('a1', a1), ('a2', a2)):
        if mat.m_count != m_count:
            raise DimensionMismatch(f"{name} is {mat.m_count}x{mat.m_count}, grid has {m_count} nodes")


def _check_finite(step, *vectors):
    for vec in vectors:
        if not np.all(np.isfinite(vec)):
            magnitude = np.where(np.isnan(vec), np.inf, np.abs(vec))
            node = int(np.argmax(magnitude))
            raise Divergence(step=step, node=node, magnitude=float(abs(vec[node])))


# ============================================================================
# ASSEMBLY
# ============================================================================

def assemble_1d(problem, a1, a2, cfg, state):
    _check_1d_matrices(problem, a1, a2)
    state.check_size(problem.grid.m_count)

    gamma = 2.0 * cfg.dt / 3.0
    w = extrapolate(state.u_curr, state.u_prev, cfg.step_ratio)
    c = _implicit_matrix(a2.entries, problem.nu, gamma, [(problem.advection * w, a1.entries)])
    f = (4.0 * state.u_curr - state.u_prev) / 3.0

    idx, values = _boundary_values(problem, cfg.time_at(state.step_index + 1))
    _enforce_dirichlet(c, idx, [(f, values)])
    return LinearSystem(c=c, f=f)


def assemble_2d(problem, ops, cfg, state):
    state.check_size(problem.grid.size)

    gamma = 2.0 * cfg.dt / 3.0
    w = extrapolate(state.u_curr, state.u_prev, cfg.step_ratio)
    c = _implicit_matrix(ops.laplacian, problem.nu, gamma, [(problem.advection * w, ops.gradient_sum)])
    f = (4.0 * state.u_curr - state.u_prev) / 3.0

    idx, values = _boundary_values(problem, cfg.time_at(state.step_index + 1))
    _enforce_dirichlet(c, idx, [(f, values)])
    return LinearSystem(c=c, f=f)


def assemble_coupled(problem, ops, cfg, state):
    if not state.coupled:
        raise DimensionMismatch("coupled assembly needs v_prev and v_curr")
    state.check_size(problem.grid.size)

    gamma = 2.0 * cfg.dt / 3.0
    w = extrapolate(state.u_curr, state.u_prev, cfg.step_ratio)
    eta = extrapolate(state.v_curr, state.v_prev, cfg.step_ratio)
    c = _implicit_matrix(ops.laplacian, problem.nu, gamma, [(w, ops.dx1), (eta, ops.dy1)])
    f = (4.0 * state.u_curr - state.u_prev) / 3.0
    g = (4.0 * state.v_curr - state.v_prev) / 3.0

    t_next = cfg.time_at(state.step_index + 1)
    idx, u_values = _boundary_values(problem, t_next, 'u')
    _, v_values = _boundary_values(problem, t_next, 'v')
    _enforce_dirichlet(c, idx, [(f, u_values), (g, v_values)])
    return LinearSystem(c=c, f=f, g=g)


# ============================================================================
# SOLVE
# ============================================================================

def solve_linear(system):
    """
    Dense LU with partial pivoting. The coupled variant reuses one
    factorization for both right-hand sides.
    """
    c = system.c
    scale = float(np.abs(c).sum(axis=1).max()) if c.size else 0.0
    if not np.isfinite(scale):
        raise SingularMatrix("system matrix has non-finite entries")

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(c, check_finite=False)

    smallest = float(np.abs(np.diag(lu)).min())
    if scale == 0.0 or smallest < PIVOT_TOLERANCE * scale:
        raise SingularMatrix(f"pivot magnitude {smallest:.3e} below {PIVOT_TOLERANCE:g} * ||C||inf = {scale:.3e}")

    solutions = []
    for rhs in (system.f, system.g):
        if rhs is None:
            continue
        x = lu_solve((lu, piv), rhs, check_finite=False)
        if not np.all(np.isfinite(x)):
            # non-finite data, reported as divergence by the marcher
            solutions.append(x)
            continue
        residual = float(np.abs(c @ x - rhs).max())
        bound = RESIDUAL_TOLERANCE * (1.0 + float(np.abs(rhs).max()))
        if not residual <= bound:
            raise ResidualTooLarge(f"||Cx - F||inf = {residual:.3e} exceeds {bound:.3e}")
        solutions.append(x)

    return solutions[0] if system.g is None else tuple(solutions)


# ============================================================================
# STARTUP
# ============================================================================

def build_operators(problem):
    """(A1, A2) for a 1D problem, an Operator2D otherwise."""
    if problem.model is Model.BURGERS_1D:
        return derivative_matrices(problem.grid)
    return derivative_operators(problem.grid)


def initial_state(problem):
    """u^0 (and v^0) sampled from the initial condition on every node."""
    if problem.model is Model.BURGERS_1D:
        u0 = _sample(problem.ic, problem.grid.m_count, problem.grid.nodes)
        v0 = None
    else:
        X, Y = problem.grid.coordinates()
        if problem.model is Model.BURGERS_2D:
            u0, v0 = _sample(problem.ic, X.size, X, Y), None
        else:
            u0, v0 = _sample(problem.ic_u, X.size, X, Y), _sample(problem.ic_v, X.size, X, Y)
    for name, vec in (('u', u0), ('v', v0)):
        if vec is not None and not np.all(np.isfinite(vec)):
            raise InvalidArgument(f"initial condition for {name} is not finite on every node")
    return u0, v0


def _spatial_terms(problem, operators):
    """(D2, D1 paired with u, D1 paired with v or None) for the model."""
    if problem.model is Model.BURGERS_1D:
        a1, a2 = operators
        if not isinstance(a1, DqMatrix):
            raise InvalidArgument("a 1D problem needs an (A1, A2) pair of weighting matrices")
        _check_1d_matrices(problem, a1, a2)
        return a2.entries, a1.entries, None
    if not isinstance(operators, Operator2D):
        raise InvalidArgument("a 2D problem needs an Operator2D")
    if problem.model is Model.BURGERS_2D:
        return operators.laplacian, operators.gradient_sum, None
    return operators.laplacian, operators.dx1, operators.dy1


def bdf1_startup(problem, operators, cfg, u0, v0=None):
    """
    u^1 from u^0. Implicit (default):

        [I - dt nu D2 + dt diag(u^0) D1] u^1 = u^0

    Explicit reproduces the forward update u^1 = u^0 + dt (nu D2 u^0 - u^0 D1 u^0).
    Returns u^1, or (u^1, v^1) for the coupled model.
    """
    coupled = problem.model is Model.COUPLED
    size = problem.grid.m_count if problem.model is Model.BURGERS_1D else problem.grid.size
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (size,):
        raise DimensionMismatch(f"u0 has shape {u0.shape}, grid needs ({size},)")
    if coupled:
        if v0 is None:
            raise DimensionMismatch("the coupled startup needs v0")
        v0 = np.asarray(v0, dtype=float)
        if v0.shape != (size,):
            raise DimensionMismatch(f"v0 has shape {v0.shape}, grid needs ({size},)")

    d2, d1_x, d1_y = _spatial_terms(problem, operators)
    advection = getattr(problem, 'advection', 1.0)
    terms = [(advection * u0, d1_x)]
    if coupled:
        terms.append((v0, d1_y))

    t1 = cfg.time_at(1)
    idx, u_values = _boundary_values(problem, t1, 'u')
    v_values = _boundary_values(problem, t1, 'v')[1] if coupled else None

    if cfg.startup is StartupScheme.EXPLICIT:
        def forward(vec):
            rate = problem.nu * (d2 @ vec)
            for w, d1 in terms:
                rate -= w * (d1 @ vec)
            return vec + cfg.dt * rate

        u1 = forward(u0)
        u1[idx] = u_values
        if not coupled:
            return u1
        v1 = forward(v0)
        v1[idx] = v_values
        return u1, v1

    c = _implicit_matrix(d2, problem.nu, cfg.dt, terms)
    f = u0.copy()
    if coupled:
        g = v0.copy()
        _enforce_dirichlet(c, idx, [(f, u_values), (g, v_values)])
        return solve_linear(LinearSystem(c=c, f=f, g=g))
    _enforce_dirichlet(c, idx, [(f, u_values)])
    return solve_linear(LinearSystem(c=c, f=f))


# ============================================================================
# MARCH
# ============================================================================

def _assemble(problem, operators, cfg, state):
    if problem.model is Model.BURGERS_1D:
        a1, a2 = operators
        return assemble_1d(problem, a1, a2, cfg, state)
    if problem.model is Model.BURGERS_2D:
        return assemble_2d(problem, operators, cfg, state)
    return assemble_coupled(problem, operators, cfg, state)


def expected_sample_count(n_steps, sample_every):
    """t=0, every ``sample_every``-th step, and the final step."""
    count = n_steps // sample_every + 1
    return count + (1 if n_steps % sample_every else 0)


def march(problem, cfg, sample_every=1, progress=None, progress_every=500):
    """
    Integrate ``problem`` from t=0 to cfg.t_final.

    Snapshots are recorded at t=0, every ``sample_every`` steps and at
    t_final. ``progress(step, n_steps)`` is called every ``progress_every``
    steps when given.
    """
    if int(sample_every) != sample_every or sample_every < 1:
        raise InvalidArgument(f"sample_every must be an integer >= 1, got {sample_every!r}")
    sample_every = int(sample_every)
    coupled = problem.model is Model.COUPLED
    n_steps = cfg.n_steps

    logger.info(
        "marching %s: %r, dt=%g, T=%g (%d steps, startup=%s)",
        problem.model.value, problem.grid, cfg.dt, cfg.t_final, n_steps, cfg.startup.value,
    )

    operators = build_operators(problem)
    u_curr, v_curr = initial_state(problem)
    times, u_rows, v_rows = [0.0], [u_curr.copy()], [v_curr.copy()] if coupled else None

    def record(step, u, v):
        if step % sample_every == 0 or step == n_steps:
            times.append(cfg.time_at(step))
            u_rows.append(u.copy())
            if coupled:
                v_rows.append(v.copy())
        if progress is not None and progress_every and step % progress_every == 0:
            progress(step, n_steps)

    started = bdf1_startup(problem, operators, cfg, u_curr, v_curr)
    u_prev, v_prev = u_curr, v_curr
    u_curr, v_curr = started if coupled else (started, None)
    _check_finite(1, u_curr, *([v_curr] if coupled else []))
    record(1, u_curr, v_curr)

    for n in range(1, n_steps):
        state = BdfState(
            u_prev=u_prev, u_curr=u_curr, step_index=n, time=cfg.time_at(n),
            v_prev=v_prev, v_curr=v_curr,
        )
        result = solve_linear(_assemble(problem, operators, cfg, state))
        u_next, v_next = result if coupled else (result, None)
        _check_finite(n + 1, u_next, *([v_next] if coupled else []))
        u_prev, v_prev, u_curr, v_curr = u_curr, v_curr, u_next, v_next
        record(n + 1, u_curr, v_curr)

    solution = Solution(
        model=problem.model,
        grid=problem.grid,
        config=cfg,
        times=np.array(times),
        u=np.array(u_rows),
        v=np.array(v_rows) if coupled else None,
        exact=problem.exact,
        parameters=_problem_parameters(problem),
    )
    logger.info("march finished with %d snapshots", solution.sample_count)
    return solution


def _problem_parameters(problem):
    if problem.model is Model.COUPLED:
        return {'reynolds': problem.reynolds, 'nu': problem.nu}
    return {'nu': problem.nu, 'advection': problem.advection}
