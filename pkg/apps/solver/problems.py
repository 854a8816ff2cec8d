# apps/solver/problems.py
"""
Problem, time-grid and state types for the BDF2 marcher.

Initial and boundary data are plain callables evaluated on numpy arrays:

    Problem1D:      ic(x),      bc_left(t), bc_right(t)
    Problem2D:      ic(x, y),   bc(x, y, t)
    ProblemCoupled: ic_u(x, y), ic_v(x, y), bc_u(x, y, t), bc_v(x, y, t)

An optional ``exact`` oracle has the same signature as the boundary data
(coupled: returns a ``(u, v)`` pair) and lets harnesses score a Solution.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, ClassVar, Optional

import numpy as np

from apps.collocation.exceptions import DimensionMismatch, InvalidArgument, TimeNotSampled
from apps.collocation.grid import Grid1D, Grid2D


class Model(str, Enum):
    BURGERS_1D = 'burgers1d'
    BURGERS_2D = 'burgers2d'
    COUPLED = 'coupled'


class StartupScheme(str, Enum):
    IMPLICIT = 'implicit'
    EXPLICIT = 'explicit'


# Relative slack allowed when checking that t_final is a whole number of steps.
STEP_COUNT_TOLERANCE = 1e-9


def _positive(name, value, allow_zero=False):
    if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
        raise InvalidArgument(f"{name} must be a finite number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = '>= 0' if allow_zero else '> 0'
        raise InvalidArgument(f"{name} must be {bound}, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class TimeConfig:
    """Constant-step time grid: N = t_final / dt steps of size dt."""

    dt: float
    t_final: float
    step_ratio: float = 1.0
    startup: StartupScheme = StartupScheme.IMPLICIT

    def __post_init__(self):
        object.__setattr__(self, 'dt', _positive('dt', self.dt))
        object.__setattr__(self, 't_final', _positive('t_final', self.t_final))
        if self.step_ratio != 1.0:
            raise InvalidArgument(f"only constant steps are supported (step_ratio == 1), got {self.step_ratio!r}")
        try:
            object.__setattr__(self, 'startup', StartupScheme(self.startup))
        except ValueError:
            raise InvalidArgument(f"unknown startup scheme {self.startup!r}") from None

        ratio = self.t_final / self.dt
        steps = round(ratio)
        if steps < 1 or abs(ratio - steps) > STEP_COUNT_TOLERANCE * max(1.0, ratio):
            raise InvalidArgument(
                f"t_final/dt must be a positive integer (t_final={self.t_final!r}, dt={self.dt!r})"
            )

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))

    def time_at(self, n):
        return n * self.dt


@dataclass(frozen=True, eq=False)
class Problem1D:
    """u_t + a u u_x = nu u_xx on [lo, hi] with Dirichlet data at both ends."""

    model: ClassVar[Model] = Model.BURGERS_1D

    grid: Grid1D
    nu: float
    ic: Callable
    bc_left: Callable
    bc_right: Callable
    advection: float = 1.0
    exact: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, 'nu', _positive('nu', self.nu, allow_zero=True))


@dataclass(frozen=True, eq=False)
class Problem2D:
    """u_t + a u (u_x + u_y) = nu (u_xx + u_yy) on a rectangle."""

    model: ClassVar[Model] = Model.BURGERS_2D

    grid: Grid2D
    nu: float
    ic: Callable
    bc: Callable
    advection: float = 1.0
    exact: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, 'nu', _positive('nu', self.nu, allow_zero=True))


@dataclass(frozen=True, eq=False)
class ProblemCoupled:
    """
    u_t + u u_x + v u_y = (1/Re) lap(u)
    v_t + u v_x + v v_y = (1/Re) lap(v)
    """

    model: ClassVar[Model] = Model.COUPLED

    grid: Grid2D
    reynolds: float
    ic_u: Callable
    ic_v: Callable
    bc_u: Callable
    bc_v: Callable
    exact: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, 'reynolds', _positive('reynolds', self.reynolds))

    @property
    def nu(self):
        return 1.0 / self.reynolds


@dataclass(frozen=True, eq=False)
class BdfState:
    """The two most recent time levels u^{n-1}, u^n (and v for the coupled model)."""

    u_prev: np.ndarray
    u_curr: np.ndarray
    step_index: int
    time: float
    v_prev: Optional[np.ndarray] = None
    v_curr: Optional[np.ndarray] = None

    @property
    def coupled(self):
        return self.v_curr is not None

    def check_size(self, size):
        vectors = [('u_prev', self.u_prev), ('u_curr', self.u_curr)]
        if self.coupled:
            vectors += [('v_prev', self.v_prev), ('v_curr', self.v_curr)]
        for name, vec in vectors:
            if vec is None or np.shape(vec) != (size,):
                raise DimensionMismatch(f"{name} has shape {np.shape(vec)}, grid needs ({size},)")


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """C x = F (and C y = G for the coupled model); boundary rows of C are unit rows."""

    c: np.ndarray
    f: np.ndarray
    g: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ('c', 'f', 'g'):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, np.asarray(value, dtype=float))
        if self.c.ndim != 2 or self.c.shape[0] != self.c.shape[1]:
            raise DimensionMismatch(f"system matrix must be square, got shape {self.c.shape}")
        for name, rhs in (('f', self.f), ('g', self.g)):
            if rhs is not None and rhs.shape != (self.c.shape[0],):
                raise DimensionMismatch(f"{name} has shape {rhs.shape}, matrix is {self.c.shape}")

    @property
    def size(self):
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class Solution:
    """Recorded snapshots of a march; row s of ``u`` is the state at ``times[s]``."""

    model: Model
    grid: object
    config: TimeConfig
    times: np.ndarray
    u: np.ndarray
    v: Optional[np.ndarray] = None
    exact: Optional[Callable] = None
    parameters: dict = field(default_factory=dict)

    @property
    def sample_count(self):
        return int(self.times.size)

    @property
    def final_u(self):
        return self.u[-1]

    @property
    def final_v(self):
        return None if self.v is None else self.v[-1]

    def snapshot_index(self, t, tol=1e-9):
        """Index of the snapshot recorded at time t (relative tolerance on the step size)."""
        hits = np.flatnonzero(np.abs(self.times - t) <= tol * max(self.config.dt, abs(t)))
        if hits.size == 0:
            raise TimeNotSampled(f"t={t!r} is not a recorded snapshot time")
        return int(hits[0])

    def coordinates(self):
        """Node coordinates as a tuple of flattened arrays: (x,) in 1D, (x, y) in 2D."""
        if isinstance(self.grid, Grid2D):
            return self.grid.coordinates()
        return (self.grid.nodes,)
