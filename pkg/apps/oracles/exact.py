# apps/oracles/exact.py
"""
Exact solutions and the initial/boundary data generators for each test case.

    1d-wood     u = 2 nu pi e^{-nu pi^2 t} sin(pi x) / (sigma + e^{-nu pi^2 t} cos(pi x))
    1d-fourier  u(x, 0) = 4x(1 - x), zero Dirichlet data, Fourier-series solution
    1d-zero     zero data everywhere
    2d          u = 1 / (1 + e^{Re (x + y - t) / 2})
    coupled     u, v = 3/4 -/+ 1 / (4 (1 + e^{Re (4y - 4x - t) / 32}))

Logistic forms are evaluated with scipy's expit, 1/(1 + e^s) == expit(-s),
which stays finite for any Re.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.integrate import simpson
from scipy.special import expit

from apps.collocation.exceptions import EvaluationError, InvalidArgument, MissingParameter
from apps.collocation.grid import UNIT_INTERVAL, Interval, chebyshev_gauss_lobatto, tensor_grid
from apps.solver.problems import Problem1D, Problem2D, ProblemCoupled

logger = logging.getLogger(__name__)

SERIES_CUTOFF = 1e-15
DENOMINATOR_FLOOR = 1e-13


# ============================================================================
# CASE 1: WOOD'S CLOSED FORM
# ============================================================================

def wood_exact(x, t, nu, sigma):
    if not sigma > 1:
        raise InvalidArgument(f"sigma must be > 1, got {sigma!r}")
    x = np.asarray(x, dtype=float)
    decay = np.exp(-nu * np.pi ** 2 * t)
    value = 2.0 * nu * np.pi * decay * np.sin(np.pi * x) / (sigma + decay * np.cos(np.pi * x))
    return value if value.ndim else float(value)


# ============================================================================
# CASE 2: FOURIER SERIES
# ============================================================================

@dataclass(frozen=True)
class FourierSeriesParams:
    nu: float
    n_terms: int = 200
    quad_panels: int = 2 ** 16

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu > 0):
            raise InvalidArgument(f"nu must be > 0, got {self.nu!r}")
        if int(self.n_terms) != self.n_terms or self.n_terms < 1:
            raise InvalidArgument(f"n_terms must be a positive integer, got {self.n_terms!r}")
        if int(self.quad_panels) != self.quad_panels or self.quad_panels < 2 or self.quad_panels % 2:
            raise InvalidArgument(f"quad_panels must be even and >= 2, got {self.quad_panels!r}")

    def doubled(self):
        return FourierSeriesParams(self.nu, 2 * self.n_terms, 2 * self.quad_panels)


@lru_cache(maxsize=32)
def fourier_coefficients(params):
    """
    c_0 = int_0^1 exp(-x^2 (3 - 2x) / (3 nu)) dx
    c_n = 2 int_0^1 exp(-x^2 (3 - 2x) / (3 nu)) cos(n pi x) dx

    Composite Simpson over ``quad_panels`` panels. Results are cached per
    params and returned read-only.
    """
    x = np.linspace(0.0, 1.0, params.quad_panels + 1)
    weight = np.exp(-x ** 2 * (3.0 - 2.0 * x) / (3.0 * params.nu))
    c0 = float(simpson(weight, x=x))
    cn = np.empty(params.n_terms)
    for n in range(1, params.n_terms + 1):
        cn[n - 1] = 2.0 * simpson(weight * np.cos(n * np.pi * x), x=x)
    cn.setflags(write=False)
    logger.debug("fourier coefficients for nu=%g: c0=%.12g, %d terms", params.nu, c0, params.n_terms)
    return c0, cn


def fourier_exact(x, t, params):
    """
    u = 2 nu pi sum c_n e^{-n^2 pi^2 nu t} n sin(n pi x)
               / (c_0 + sum c_n e^{-n^2 pi^2 nu t} cos(n pi x))

    Defined for t > 0. Summation stops once 2 c_0 e^{-n^2 pi^2 nu t}, a bound
    on every remaining coefficient's contribution, falls below 1e-15 of the
    running denominator.
    """
    if not t > 0:
        raise InvalidArgument(f"the series solution needs t > 0, got {t!r}")
    c0, cn = fourier_coefficients(params)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    numerator = np.zeros_like(x)
    denominator = np.full_like(x, c0)
    for n in range(1, params.n_terms + 1):
        decay = math.exp(-n * n * np.pi ** 2 * params.nu * t)
        if 2.0 * abs(c0) * decay < SERIES_CUTOFF * np.abs(denominator).min():
            break
        weight = cn[n - 1] * decay
        numerator += weight * n * np.sin(n * np.pi * x)
        denominator += weight * np.cos(n * np.pi * x)

    smallest = float(np.abs(denominator).min())
    if smallest < DENOMINATOR_FLOOR:
        raise EvaluationError(f"series denominator {smallest:.3e} below {DENOMINATOR_FLOOR:g} (nu={params.nu!r}, t={t!r})")
    value = 2.0 * params.nu * np.pi * numerator / denominator
    return float(value[0]) if scalar else value


def case2_initial(x):
    x = np.asarray(x, dtype=float)
    value = 4.0 * x * (1.0 - x)
    return value if value.ndim else float(value)


# ============================================================================
# 2D SCALAR AND COUPLED CLOSED FORMS
# ============================================================================

def exact_2d(x, y, t, reynolds):
    s = reynolds * (np.asarray(x, dtype=float) + np.asarray(y, dtype=float) - t) / 2.0
    value = expit(-s)
    return value if np.ndim(value) else float(value)


def exact_coupled(x, y, t, reynolds):
    s = reynolds * (4.0 * np.asarray(y, dtype=float) - 4.0 * np.asarray(x, dtype=float) - t) / 32.0
    bracket = expit(-s) / 4.0
    u, v = 0.75 - bracket, 0.75 + bracket
    if np.ndim(bracket):
        return u, v
    return float(u), float(v)


def exact_2d_edges(reynolds, x_interval=UNIT_INTERVAL, y_interval=UNIT_INTERVAL):
    """
    The four Dirichlet edge functions of the 2D case:
    x_lo/x_hi take (y, t), y_lo/y_hi take (x, t).
    """
    return {
        'x_lo': lambda y, t: exact_2d(x_interval.lo, y, t, reynolds),
        'x_hi': lambda y, t: exact_2d(x_interval.hi, y, t, reynolds),
        'y_lo': lambda x, t: exact_2d(x, y_interval.lo, t, reynolds),
        'y_hi': lambda x, t: exact_2d(x, y_interval.hi, t, reynolds),
    }


def _edge_dirichlet(edges, x_interval, y_interval):
    """Combine edge functions into bc(x, y, t); x-edges win at the corners."""
    def bc(x, y, t):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        on_y_lo = np.isclose(y, y_interval.lo, rtol=0.0, atol=1e-12 * y_interval.length)
        value = np.where(on_y_lo, edges['y_lo'](x, t), edges['y_hi'](x, t))
        value = np.where(np.isclose(x, x_interval.lo, rtol=0.0, atol=1e-12 * x_interval.length),
                         edges['x_lo'](y, t), value)
        value = np.where(np.isclose(x, x_interval.hi, rtol=0.0, atol=1e-12 * x_interval.length),
                         edges['x_hi'](y, t), value)
        return value
    return bc


# ============================================================================
# CASE FACTORY
# ============================================================================

class CaseId(str, Enum):
    WOOD_1D = '1d-wood'
    FOURIER_1D = '1d-fourier'
    ZERO_1D = '1d-zero'
    SCALAR_2D = '2d'
    COUPLED = 'coupled'


@dataclass(frozen=True)
class CaseParams:
    """Everything a case needs; exactly one of nu / reynolds is required."""

    sigma: Optional[float] = None
    nu: Optional[float] = None
    reynolds: Optional[float] = None
    m_nodes: Optional[int] = None
    mx: Optional[int] = None
    my: Optional[int] = None
    n_terms: int = 200
    quad_panels: int = 2 ** 16
    x_interval: Interval = UNIT_INTERVAL
    y_interval: Interval = UNIT_INTERVAL

    def viscosity(self):
        if self.nu is None and self.reynolds is None:
            raise MissingParameter("one of nu or reynolds is required")
        if self.nu is not None and self.reynolds is not None:
            if not math.isclose(self.nu * self.reynolds, 1.0, rel_tol=1e-12):
                raise InvalidArgument(f"nu={self.nu!r} and reynolds={self.reynolds!r} are not reciprocal")
        value = self.nu if self.nu is not None else 1.0 / self.reynolds
        if not (math.isfinite(value) and value > 0):
            raise InvalidArgument(f"viscosity must be > 0, got {value!r}")
        return float(value)

    def reynolds_number(self):
        nu = self.viscosity()
        return float(self.reynolds) if self.reynolds is not None else 1.0 / nu

    def fourier_params(self):
        return FourierSeriesParams(self.viscosity(), self.n_terms, self.quad_panels)

    def grid_1d(self):
        if self.m_nodes is None:
            raise MissingParameter("m_nodes is required for a 1D case")
        return chebyshev_gauss_lobatto(self.x_interval, self.m_nodes)

    def grid_2d(self):
        mx = self.mx if self.mx is not None else self.m_nodes
        my = self.my if self.my is not None else self.m_nodes
        if mx is None or my is None:
            raise MissingParameter("mx and my (or m_nodes) are required for a 2D case")
        return tensor_grid(
            chebyshev_gauss_lobatto(self.x_interval, mx),
            chebyshev_gauss_lobatto(self.y_interval, my),
        )


def problem_factory(case_id, params):
    try:
        case_id = CaseId(case_id)
    except ValueError:
        raise InvalidArgument(f"unknown case {case_id!r}") from None

    if case_id is CaseId.WOOD_1D:
        return _wood_problem(params)
    if case_id is CaseId.FOURIER_1D:
        return _fourier_problem(params)
    if case_id is CaseId.ZERO_1D:
        return _zero_problem(params)
    if case_id is CaseId.SCALAR_2D:
        return _scalar_2d_problem(params)
    return _coupled_problem(params)


def _wood_problem(params):
    if params.sigma is None:
        raise MissingParameter("sigma is required for case 1d-wood")
    nu, sigma = params.viscosity(), params.sigma
    if not sigma > 1:
        raise InvalidArgument(f"sigma must be > 1, got {sigma!r}")
    grid = params.grid_1d()
    lo, hi = params.x_interval.lo, params.x_interval.hi
    return Problem1D(
        grid=grid,
        nu=nu,
        ic=lambda x: wood_exact(x, 0.0, nu, sigma),
        bc_left=lambda t: wood_exact(lo, t, nu, sigma),
        bc_right=lambda t: wood_exact(hi, t, nu, sigma),
        exact=lambda x, t: wood_exact(x, t, nu, sigma),
    )


def _fourier_problem(params):
    series = params.fourier_params()
    grid = params.grid_1d()

    def exact(x, t):
        return case2_initial(x) if t <= 0 else fourier_exact(x, t, series)

    return Problem1D(
        grid=grid,
        nu=series.nu,
        ic=case2_initial,
        bc_left=lambda t: 0.0,
        bc_right=lambda t: 0.0,
        exact=exact,
    )


def _zero_problem(params):
    return Problem1D(
        grid=params.grid_1d(),
        nu=params.viscosity(),
        ic=np.zeros_like,
        bc_left=lambda t: 0.0,
        bc_right=lambda t: 0.0,
        exact=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
    )


def _scalar_2d_problem(params):
    reynolds = params.reynolds_number()
    grid = params.grid_2d()
    edges = exact_2d_edges(reynolds, params.x_interval, params.y_interval)
    return Problem2D(
        grid=grid,
        nu=params.viscosity(),
        ic=lambda x, y: exact_2d(x, y, 0.0, reynolds),
        bc=_edge_dirichlet(edges, params.x_interval, params.y_interval),
        exact=lambda x, y, t: exact_2d(x, y, t, reynolds),
    )


def _coupled_problem(params):
    reynolds = params.reynolds_number()
    return ProblemCoupled(
        grid=params.grid_2d(),
        reynolds=reynolds,
        ic_u=lambda x, y: exact_coupled(x, y, 0.0, reynolds)[0],
        ic_v=lambda x, y: exact_coupled(x, y, 0.0, reynolds)[1],
        bc_u=lambda x, y, t: exact_coupled(x, y, t, reynolds)[0],
        bc_v=lambda x, y, t: exact_coupled(x, y, t, reynolds)[1],
        exact=lambda x, y, t: exact_coupled(x, y, t, reynolds),
    )
