# apps/collocation/dqm.py
"""
Generalized differential quadrature (GDQM) weighting matrices.

The m-th derivative at node x_i is approximated by a weighted sum of the
function values at every node:

    d^m u / dx^m (x_i) = sum_j a_ij^(m) u_j

First-derivative weights come from Lagrange-basis differentiation,
higher orders from dense matrix powers A^(m) = A^m. 2D operators are the
Kronecker liftings Dx = A kron I_My and Dy = I_Mx kron B (x-major order).
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DegenerateGrid, DimensionMismatch, InvalidArgument

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DqMatrix:
    """Dense M x M weighting matrix of derivative order ``order``."""

    entries: np.ndarray
    order: int

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"weighting matrix must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def m_count(self):
        return self.entries.shape[0]

    def interior_block(self):
        """Rows and columns 2..M-1 (1-based), i.e. the block acting on interior nodes."""
        return self.entries[1:-1, 1:-1].copy()


def first_derivative_matrix(grid):
    """
    a_ij = Q_i / ((x_i - x_j) Q_j) for i != j,   a_ii = -sum_{j != i} a_ij
    with Q_i = prod_{j != i} (x_i - x_j).
    """
    x = np.asarray(grid.nodes, dtype=float)
    m_count = x.size
    if m_count < 2:
        raise DegenerateGrid(f"need at least 2 nodes, got {m_count}")

    diff = np.subtract.outer(x, x)
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise DegenerateGrid("grid contains duplicate nodes")

    q = np.prod(diff, axis=1)
    if not np.all(np.isfinite(q)) or np.any(q == 0.0):
        raise DegenerateGrid(f"node products under/overflow at M={m_count}")

    entries = np.outer(q, 1.0 / q) / diff
    np.fill_diagonal(entries, 0.0)
    np.fill_diagonal(entries, -entries.sum(axis=1))
    return DqMatrix(entries=entries, order=1)


def higher_derivative_matrix(a1, order):
    """A^(m) = A^m by repeated dense multiplication."""
    if a1.order != 1:
        raise InvalidArgument(f"expected a first-derivative matrix, got order {a1.order}")
    if int(order) != order or order < 1:
        raise InvalidArgument(f"derivative order must be >= 1, got {order}")
    return DqMatrix(entries=np.linalg.matrix_power(a1.entries, int(order)), order=int(order))


def derivative_matrices(grid):
    """(A^(1), A^(2)) for a 1D grid."""
    a1 = first_derivative_matrix(grid)
    return a1, higher_derivative_matrix(a1, 2)


def apply_derivative(d, u):
    u = np.asarray(u, dtype=float)
    if u.shape[0] != d.m_count:
        raise DimensionMismatch(f"vector has {u.shape[0]} entries, matrix is {d.m_count}x{d.m_count}")
    return d.entries @ u


@dataclass(frozen=True, eq=False)
class Operator2D:
    """Full-grid derivative operators, each (Mx*My) x (Mx*My)."""

    dx1: np.ndarray
    dx2: np.ndarray
    dy1: np.ndarray
    dy2: np.ndarray
    grid: object

    @cached_property
    def laplacian(self):
        return self.dx2 + self.dy2

    @cached_property
    def gradient_sum(self):
        return self.dx1 + self.dy1


def lift_to_2d(ax1, ax2, by1, by2, grid):
    """Dx^(m) = A^(m) kron I_My,  Dy^(m) = I_Mx kron B^(m)."""
    for name, mat, expected in (('ax1', ax1, grid.mx), ('ax2', ax2, grid.mx),
                                ('by1', by1, grid.my), ('by2', by2, grid.my)):
        if mat.m_count != expected:
            raise DimensionMismatch(f"{name} is {mat.m_count}x{mat.m_count}, grid needs {expected}")

    eye_x = np.eye(grid.mx)
    eye_y = np.eye(grid.my)
    logger.debug("lifting GDQM matrices to a %dx%d grid", grid.mx, grid.my)
    return Operator2D(
        dx1=np.kron(ax1.entries, eye_y),
        dx2=np.kron(ax2.entries, eye_y),
        dy1=np.kron(eye_x, by1.entries),
        dy2=np.kron(eye_x, by2.entries),
        grid=grid,
    )


def derivative_operators(grid):
    """Build both 1D families for a Grid2D and lift them."""
    ax1, ax2 = derivative_matrices(grid.gx)
    by1, by2 = derivative_matrices(grid.gy)
    return lift_to_2d(ax1, ax2, by1, by2, grid)
