# apps/stability/spectra.py
"""
Frozen-coefficient stability of the semi-discrete systems.

Freezing the advecting velocity at nodal values U_ij (and V_ij) turns the
collocated equations on the interior nodes into a linear ODE system
dU/dt = M U + E. The scheme is stable when every eigenvalue of M has a
non-positive real part; this module assembles M and inspects its spectrum.

    1D:      P = -alpha diag(U) A1 + nu A2                (interior block)
    coupled: R = diag(A, A),  A = -diag(U) Dx1 - diag(V) Dy1 + nu (Dx2 + Dy2)
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, block_diag, eigvals

from apps.collocation.dqm import derivative_matrices
from apps.collocation.exceptions import DimensionMismatch, EigensolverFailure, GridTooSmall, InvalidArgument
from apps.collocation.grid import UNIT_INTERVAL, Grid1D, chebyshev_gauss_lobatto, tensor_grid
from apps.oracles.exact import CaseId, case2_initial, exact_coupled, wood_exact

logger = logging.getLogger(__name__)

MIN_NODES = 4
VERDICT_TOLERANCE = 1e-8


class OperatorKind(str, Enum):
    P_1D = 'P-1d'
    R_COUPLED = 'R-coupled'
    A_BLOCK = 'A-block'
    B_BLOCK = 'B-block'


class SweepModel(str, Enum):
    BURGERS_1D = 'burgers1d'
    COUPLED = 'coupled'
    WEIGHTS_X = 'weights-x'
    WEIGHTS_Y = 'weights-y'


class FrozenPolicy(str, Enum):
    ZERO = 'zero'
    INITIAL = 'initial'
    SUPPLIED = 'supplied'


@dataclass(frozen=True, eq=False)
class FrozenOperator:
    matrix: np.ndarray
    kind: OperatorKind
    grid: object
    nu: float = 0.0
    frozen_state: tuple = ()

    @property
    def dimension(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class StabilityReport:
    eigenvalues: np.ndarray
    max_real_part: float
    verdict: bool
    tolerance: float
    kind: Optional[OperatorKind] = None
    size: Optional[int] = None

    @property
    def eigenvalue_count(self):
        return int(self.eigenvalues.size)

    def points(self):
        """(Re lambda, Im lambda) pairs, shape (k, 2)."""
        return np.column_stack([self.eigenvalues.real, self.eigenvalues.imag])


# ============================================================================
# OPERATORS
# ============================================================================

def _require_nodes(name, count):
    if count < MIN_NODES:
        raise GridTooSmall(f"{name} needs at least {MIN_NODES} nodes, got {count}")


def _full_vector(values, size, name):
    values = np.asarray(values, dtype=float)
    if values.shape != (size,):
        raise DimensionMismatch(f"{name} has shape {values.shape}, grid needs ({size},)")
    return values


def assemble_p_1d(grid, nu, frozen_u, alpha=1.0):
    _require_nodes('P', grid.m_count)
    frozen_u = _full_vector(frozen_u, grid.m_count, 'frozen_u')
    a1, a2 = derivative_matrices(grid)
    u_int = frozen_u[1:-1]
    matrix = -alpha * u_int[:, None] * a1.interior_block() + nu * a2.interior_block()
    return FrozenOperator(matrix=matrix, kind=OperatorKind.P_1D, grid=grid, nu=nu, frozen_state=(frozen_u,))


def _interior_lifting(grid):
    """Interior-restricted (Dx1, Dx2, Dy1, Dy2) on the (Mx-2)(My-2) interior nodes, x-major."""
    ax1, ax2 = derivative_matrices(grid.gx)
    by1, by2 = derivative_matrices(grid.gy)
    eye_x = np.eye(grid.mx - 2)
    eye_y = np.eye(grid.my - 2)
    return (
        np.kron(ax1.interior_block(), eye_y),
        np.kron(ax2.interior_block(), eye_y),
        np.kron(eye_x, by1.interior_block()),
        np.kron(eye_x, by2.interior_block()),
    )


def assemble_r_coupled(grid, reynolds, frozen_u, frozen_v):
    _require_nodes('R (x direction)', grid.mx)
    _require_nodes('R (y direction)', grid.my)
    if math.isnan(reynolds) or reynolds <= 0:
        raise InvalidArgument(f"reynolds must be > 0, got {reynolds!r}")
    nu = 1.0 / reynolds

    frozen_u = _full_vector(frozen_u, grid.size, 'frozen_u')
    frozen_v = _full_vector(frozen_v, grid.size, 'frozen_v')
    interior = grid.interior_indices()
    u_int, v_int = frozen_u[interior], frozen_v[interior]

    dx1, dx2, dy1, dy2 = _interior_lifting(grid)
    block = -u_int[:, None] * dx1 - v_int[:, None] * dy1 + nu * (dx2 + dy2)
    return FrozenOperator(
        matrix=block_diag(block, block),
        kind=OperatorKind.R_COUPLED,
        grid=grid,
        nu=nu,
        frozen_state=(frozen_u, frozen_v),
    )


def assemble_weighting_block(grid, order=1, direction='x'):
    """
    Interior block of the order-r weighting matrix. On a Grid2D it is lifted:
    x -> A_r kron I, y -> I kron B_r.
    """
    if order not in (1, 2):
        raise InvalidArgument(f"order must be 1 or 2, got {order!r}")
    if direction not in ('x', 'y'):
        raise InvalidArgument(f"direction must be 'x' or 'y', got {direction!r}")

    if isinstance(grid, Grid1D):
        _require_nodes('weighting block', grid.m_count)
        matrix = derivative_matrices(grid)[order - 1].interior_block()
        kind = OperatorKind.A_BLOCK if direction == 'x' else OperatorKind.B_BLOCK
        return FrozenOperator(matrix=matrix, kind=kind, grid=grid)

    _require_nodes('weighting block (x direction)', grid.mx)
    _require_nodes('weighting block (y direction)', grid.my)
    dx1, dx2, dy1, dy2 = _interior_lifting(grid)
    if direction == 'x':
        return FrozenOperator(matrix=(dx1, dx2)[order - 1], kind=OperatorKind.A_BLOCK, grid=grid)
    return FrozenOperator(matrix=(dy1, dy2)[order - 1], kind=OperatorKind.B_BLOCK, grid=grid)


# ============================================================================
# SPECTRUM
# ============================================================================

def spectrum(op, tolerance=None):
    """
    Eigenvalues via LAPACK (balancing, Hessenberg reduction, shifted QR).
    The verdict tolerance defaults to 1e-8 * ||M||inf.
    """
    matrix = op.matrix if isinstance(op, FrozenOperator) else np.asarray(op, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"spectrum needs a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgument("matrix has non-finite entries")

    try:
        values = eigvals(matrix, check_finite=False)
    except LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc

    if tolerance is None:
        scale = float(np.abs(matrix).sum(axis=1).max()) if matrix.size else 0.0
        tolerance = VERDICT_TOLERANCE * scale
    max_real = float(values.real.max()) if values.size else -math.inf
    return StabilityReport(
        eigenvalues=values,
        max_real_part=max_real,
        verdict=bool(max_real <= tolerance),
        tolerance=float(tolerance),
        kind=op.kind if isinstance(op, FrozenOperator) else None,
    )


# ============================================================================
# SWEEP
# ============================================================================

def _frozen_1d(grid, policy, supplied, nu, case, sigma):
    if policy is FrozenPolicy.ZERO:
        return np.zeros(grid.m_count)
    if policy is FrozenPolicy.INITIAL:
        if case is CaseId.WOOD_1D:
            return wood_exact(grid.nodes, 0.0, nu, sigma)
        return case2_initial(grid.nodes)
    return np.asarray(supplied(grid.nodes), dtype=float)


def _frozen_coupled(grid, policy, reynolds, supplied):
    if policy is FrozenPolicy.ZERO:
        return np.zeros(grid.size), np.zeros(grid.size)
    X, Y = grid.coordinates()
    if policy is FrozenPolicy.INITIAL:
        return exact_coupled(X, Y, 0.0, reynolds)
    u, v = supplied(X, Y)
    return np.asarray(u, dtype=float), np.asarray(v, dtype=float)


def stability_sweep(model, grid_sizes, nu_or_re, frozen=FrozenPolicy.INITIAL, alpha=1.0, order=1,
                    supplied=None, interval=UNIT_INTERVAL, case=CaseId.FOURIER_1D, sigma=None):
    """
    One StabilityReport per grid size. ``nu_or_re`` is the viscosity for the
    1D model and the Reynolds number for the coupled model; the weighting
    block models ignore it.

    Frozen states: ``initial`` (default) freezes at the t=0 data of the
    case: in 1D ``case`` picks 1d-fourier (4x(1-x)) or 1d-wood (needs
    ``sigma``), the coupled model uses its travelling wave. ``zero`` gives
    the pure diffusion operator; ``supplied`` calls ``supplied(x)`` /
    ``supplied(x, y) -> (u, v)`` on each grid.
    """
    try:
        model = SweepModel(model)
        frozen = FrozenPolicy(frozen)
        case = CaseId(case)
    except ValueError as exc:
        raise InvalidArgument(str(exc)) from None
    if model is SweepModel.BURGERS_1D and frozen is FrozenPolicy.INITIAL:
        if case not in (CaseId.FOURIER_1D, CaseId.WOOD_1D):
            raise InvalidArgument(f"a 1D sweep freezes at 1d-fourier or 1d-wood data, got {case.value}")
        if case is CaseId.WOOD_1D and not (sigma is not None and sigma > 1):
            raise InvalidArgument(f"freezing at 1d-wood data needs sigma > 1, got {sigma!r}")
    if frozen is FrozenPolicy.SUPPLIED and supplied is None:
        raise InvalidArgument("the supplied frozen policy needs a state function")

    sizes = [int(size) for size in grid_sizes]
    for size in sizes:
        _require_nodes('sweep grid', size)

    reports = []
    for size in sizes:
        grid_1d = chebyshev_gauss_lobatto(interval, size)
        if model is SweepModel.BURGERS_1D:
            op = assemble_p_1d(grid_1d, nu_or_re, _frozen_1d(grid_1d, frozen, supplied, nu_or_re, case, sigma), alpha=alpha)
        elif model is SweepModel.COUPLED:
            grid = tensor_grid(grid_1d, grid_1d)
            frozen_u, frozen_v = _frozen_coupled(grid, frozen, nu_or_re, supplied)
            op = assemble_r_coupled(grid, nu_or_re, frozen_u, frozen_v)
        else:
            direction = 'x' if model is SweepModel.WEIGHTS_X else 'y'
            op = assemble_weighting_block(tensor_grid(grid_1d, grid_1d), order=order, direction=direction)

        report = spectrum(op)
        reports.append(replace(report, size=size))
        logger.info(
            "%s M=%d: dim=%d max Re(lambda)=%.3e verdict=%s",
            model.value, size, op.dimension, report.max_real_part, report.verdict,
        )
    return reports
