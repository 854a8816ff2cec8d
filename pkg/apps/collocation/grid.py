# apps/collocation/grid.py
"""
Chebyshev-Gauss-Lobatto collocation grids.

A 1D grid holds the M cosine-spaced nodes of an interval, endpoints included.
A 2D grid is the tensor product of two 1D grids, flattened x-major:
the point (x_i, y_j) lives at index k = i * My + j.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import DimensionMismatch, InvalidArgument


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with finite lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidArgument(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise InvalidArgument(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    def contains(self, x, tol=1e-12):
        """True when every x lies in [lo, hi] up to tol * length."""
        slack = tol * self.length
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= self.lo - slack) & (x <= self.hi + slack)))


UNIT_INTERVAL = Interval(0.0, 1.0)


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Collocation abscissae x_0 < ... < x_{M-1} on an interval."""

    interval: Interval
    nodes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'nodes', _frozen(self.nodes))

    @property
    def m_count(self):
        return int(self.nodes.size)

    def interior_indices(self):
        return np.arange(1, self.m_count - 1)

    def __repr__(self):
        return f"Grid1D([{self.interval.lo}, {self.interval.hi}], M={self.m_count})"


def chebyshev_gauss_lobatto(iv, m_count):
    """
    Chebyshev-Gauss-Lobatto nodes on ``iv``:
        x_i = lo + (hi - lo) / 2 * (1 - cos(i * pi / (M - 1))),  i = 0..M-1

    -cos(i*pi/(M-1)) is evaluated as sin(pi*(2i-(M-1)) / (2(M-1))), whose
    argument is exactly antisymmetric in i, so mirrored nodes sum to lo + hi.
    Endpoints are then pinned to the exact interval bounds.
    """
    if int(m_count) != m_count or m_count < 2:
        raise InvalidArgument(f"a collocation grid needs at least 2 nodes, got {m_count}")
    m_count = int(m_count)

    steps = 2 * np.arange(m_count) - (m_count - 1)
    unit = np.sin(np.pi * steps / (2 * (m_count - 1)))
    nodes = iv.midpoint + 0.5 * iv.length * unit
    nodes[0] = iv.lo
    nodes[-1] = iv.hi
    return Grid1D(interval=iv, nodes=nodes)


class Ordering(str, Enum):
    X_MAJOR = 'x-major'


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Tensor product of two 1D grids; flattened index k = i * My + j."""

    gx: Grid1D
    gy: Grid1D
    ordering: Ordering = field(default=Ordering.X_MAJOR)

    @property
    def mx(self):
        return self.gx.m_count

    @property
    def my(self):
        return self.gy.m_count

    @property
    def shape(self):
        return (self.mx, self.my)

    @property
    def size(self):
        return self.mx * self.my

    def flatten(self, i, j):
        return i * self.my + j

    def unflatten(self, k):
        return divmod(k, self.my)

    def coordinates(self):
        """Flattened (x, y) coordinate arrays in x-major order."""
        X, Y = np.meshgrid(self.gx.nodes, self.gy.nodes, indexing='ij')
        return X.ravel(), Y.ravel()

    def as_matrix(self, u):
        """Reshape a flattened field to (Mx, My); entry [i, j] is u at (x_i, y_j)."""
        u = np.asarray(u)
        if u.size != self.size:
            raise DimensionMismatch(f"field has {u.size} entries, grid has {self.size}")
        return u.reshape(self.shape)

    def boundary_mask(self):
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :] = mask[-1, :] = True
        mask[:, 0] = mask[:, -1] = True
        return mask.ravel()

    def boundary_indices(self):
        return np.flatnonzero(self.boundary_mask())

    def interior_indices(self):
        return np.flatnonzero(~self.boundary_mask())

    def __repr__(self):
        return f"Grid2D({self.mx}x{self.my}, {self.ordering.value})"


def tensor_grid(gx, gy):
    return Grid2D(gx=gx, gy=gy, ordering=Ordering.X_MAJOR)
