# apps/metrics/norms.py
"""
Error norms between exact and computed solutions.

    L2   = sqrt( sum_j |u_j^exact - u_j^computed|^2 / N )
    Linf = max_j |u_j^exact - u_j^computed|

N counts every node of the reported grid, boundary nodes included.
Off-grid points are evaluated by barycentric Lagrange interpolation on the
full collocation grid (tensor-product in 2D).
"""

from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from apps.collocation.exceptions import DimensionMismatch, InvalidArgument, PointOutsideDomain
from apps.collocation.grid import Grid2D


def _difference(exact, computed):
    exact = np.asarray(exact, dtype=float).ravel()
    computed = np.asarray(computed, dtype=float).ravel()
    if exact.shape != computed.shape:
        raise DimensionMismatch(f"exact has {exact.size} entries, computed has {computed.size}")
    if exact.size == 0:
        raise InvalidArgument("error norms need at least one point")
    return exact - computed


def l2_error(exact, computed):
    diff = _difference(exact, computed)
    return float(np.sqrt(np.mean(diff ** 2)))


def linf_error(exact, computed):
    return float(np.abs(_difference(exact, computed)).max())


@dataclass(frozen=True)
class PointRow:
    coords: tuple
    time: float
    computed: float
    exact: float
    abs_error: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    n_points: int
    pointwise: Optional[List[PointRow]] = None

    def as_summary(self):
        return {'l2': self.l2, 'linf': self.linf, 'n_points': self.n_points}


def error_report(exact, computed, pointwise=None):
    diff = _difference(exact, computed)
    return ErrorReport(
        l2=float(np.sqrt(np.mean(diff ** 2))),
        linf=float(np.abs(diff).max()),
        n_points=int(diff.size),
        pointwise=pointwise,
    )


# ============================================================================
# SNAPSHOT EVALUATION
# ============================================================================

def interpolate_snapshot(grid, values, point):
    """Value of the grid interpolant at ``point`` (x in 1D, (x, y) in 2D)."""
    values = np.asarray(values, dtype=float)
    if isinstance(grid, Grid2D):
        x, y = point
        if not (grid.gx.interval.contains(x) and grid.gy.interval.contains(y)):
            raise PointOutsideDomain(f"({x}, {y}) lies outside the grid domain")
        along_x = BarycentricInterpolator(grid.gx.nodes, grid.as_matrix(values), axis=0)(x)
        return float(BarycentricInterpolator(grid.gy.nodes, along_x)(y))

    x = point[0] if isinstance(point, (tuple, list)) else point
    if not grid.interval.contains(x):
        raise PointOutsideDomain(f"x={x} lies outside [{grid.interval.lo}, {grid.interval.hi}]")
    if values.shape != (grid.m_count,):
        raise DimensionMismatch(f"snapshot has shape {values.shape}, grid has {grid.m_count} nodes")
    return float(BarycentricInterpolator(grid.nodes, values)(x))


def _component(solution, component):
    if component == 'u':
        return solution.u
    if component == 'v' and solution.v is not None:
        return solution.v
    raise InvalidArgument(f"solution has no component {component!r}")


def _oracle_value(oracle, coords, time, component):
    value = oracle(*coords, time)
    if isinstance(value, tuple):
        value = value[0] if component == 'u' else value[1]
    return float(value)


def point_table(solution, oracle, points, time, component='u'):
    """One PointRow per requested point at a recorded snapshot time."""
    oracle = oracle or solution.exact
    if oracle is None:
        raise InvalidArgument("point_table needs an exact-solution oracle")
    snapshot = _component(solution, component)[solution.snapshot_index(time)]

    rows = []
    for point in points:
        coords = tuple(float(c) for c in np.atleast_1d(point))
        computed = interpolate_snapshot(solution.grid, snapshot, coords)
        exact = _oracle_value(oracle, coords, time, component)
        rows.append(PointRow(coords=coords, time=float(time), computed=computed,
                             exact=exact, abs_error=abs(computed - exact)))
    return rows


def exact_snapshot(solution, index, component='u'):
    """The oracle evaluated on every node at snapshot ``index``."""
    if solution.exact is None:
        raise InvalidArgument("solution carries no exact-solution oracle")
    value = solution.exact(*solution.coordinates(), float(solution.times[index]))
    if isinstance(value, tuple):
        value = value[0] if component == 'u' else value[1]
    return np.broadcast_to(np.asarray(value, dtype=float), solution.u[index].shape)


def solution_error(solution, time=None, component='u'):
    """ErrorReport of a snapshot (default: the final one) against the solution's oracle."""
    index = solution.sample_count - 1 if time is None else solution.snapshot_index(time)
    computed = _component(solution, component)[index]
    return error_report(exact_snapshot(solution, index, component), computed)


def max_sum_drift(solution, total=1.5):
    """max |u + v - total| over every recorded snapshot of a coupled solution."""
    if solution.v is None:
        raise InvalidArgument("max_sum_drift needs a coupled solution")
    return float(np.abs(solution.u + solution.v - total).max())
