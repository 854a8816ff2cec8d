# apps/experiments/tables.py
"""
Table reproduction.

Each published table is a TableSpec: the key and column names of its
layout, and a list of independent tasks. A task runs one configuration
and returns the Cells it scores. Cells are checked one of two ways:

    within  |computed - published| <= tolerance   (solution values, exact values)
    bound   computed <= max(factor * published, floor)   (error norms)

Cells listed in reference.FLAGGED, and cells whose exact solution cannot
be evaluated, are reported as 'flagged' and never fail a table.
"""

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Tuple

from apps.collocation.exceptions import EvaluationError, InvalidArgument, NumericalFailure
from apps.metrics.norms import point_table, solution_error
from apps.oracles.exact import CaseParams, exact_coupled, fourier_exact, problem_factory, wood_exact
from apps.solver.problems import TimeConfig
from apps.solver.stepper import march

from . import reference

logger = logging.getLogger(__name__)

# Tolerance factors on published error norms.
NORM_FACTOR_1D = 10.0
NORM_FACTOR_2D = 30.0
NORM_FLOOR = 1e-12
POINT_ERROR_FLOOR_1D = 5e-6
POINT_ERROR_FLOOR_2D = 1e-5
COUPLED_VALUE_TOLERANCE = 5e-4
PRINTED_EXACT_TOLERANCE = 1e-5


class CellStatus(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    FLAGGED = 'flagged'


class Check(str, Enum):
    WITHIN = 'within'
    BOUND = 'bound'


@dataclass(frozen=True)
class Cell:
    table_id: int
    key: tuple
    column: str
    computed: float
    published: float
    tolerance: float
    check: Check
    status: CellStatus
    display: str = '.5g'
    note: str = ''

    @property
    def failed(self):
        return self.status is CellStatus.FAIL

    def rounded(self, value):
        return '' if value is None or math.isnan(value) else format(value, self.display)


@dataclass(frozen=True)
class TableSpec:
    table_id: int
    title: str
    key_names: Tuple[str, ...]
    columns: Tuple[str, ...]
    tasks: Callable


@dataclass(frozen=True)
class TableResult:
    spec: TableSpec
    cells: tuple

    @property
    def failures(self):
        return [cell for cell in self.cells if cell.failed]

    def counts(self):
        counts = {status.value: 0 for status in CellStatus}
        for cell in self.cells:
            counts[cell.status.value] += 1
        return counts

    def rows(self):
        """Cells grouped by row key, in sorted key order."""
        grouped = {}
        for cell in self.cells:
            grouped.setdefault(cell.key, {})[cell.column] = cell
        return sorted(grouped.items())


# ============================================================================
# CELL CONSTRUCTION
# ============================================================================

def _status(passed, flag):
    if flag:
        return CellStatus.FLAGGED
    return CellStatus.PASS if passed else CellStatus.FAIL


def _judge(table_id, key, column, computed, passed, note):
    """(status, note). A finite miss listed as a known divergence is flagged with its evidence."""
    flag = reference.flag_for(table_id, key, column) or note
    if not flag and not passed and math.isfinite(computed):
        flag = reference.divergence_for(table_id, key, column)
    return _status(passed, flag), flag


def within_cell(table_id, key, column, computed, published, tolerance, display='.5g', note=''):
    passed = math.isfinite(computed) and abs(computed - published) <= tolerance
    status, flag = _judge(table_id, key, column, computed, passed, note)
    return Cell(table_id, key, column, computed, published, tolerance, Check.WITHIN, status, display, flag)


def bound_cell(table_id, key, column, computed, published, factor, floor=NORM_FLOOR, display='.3e', note=''):
    tolerance = max(factor * published, floor)
    passed = math.isfinite(computed) and computed <= tolerance
    status, flag = _judge(table_id, key, column, computed, passed, note)
    return Cell(table_id, key, column, computed, published, tolerance, Check.BOUND, status, display, flag)


def measure(compute):
    """
    (value, note). An exact solution that cannot be evaluated yields a NaN
    value with a note, which flags the cell; other numerical failures give
    NaN without a note, which fails it.
    """
    try:
        return float(compute()), ''
    except EvaluationError as exc:
        return math.nan, str(exc)
    except NumericalFailure as exc:
        logger.warning("cell computation failed: %s", exc)
        return math.nan, ''


class FailedRun:
    """Stand-in for a Solution whose march broke down; every measurement on it fails."""

    def __init__(self, exc):
        self.exc = exc


_case_locks = {}
_case_locks_guard = threading.Lock()


def solve_case(case_id, params, dt, t_final, sample_every):
    """
    March a case once per process; tables sharing a run reuse it. Callers
    asking for the same run from different worker threads wait for the
    first march instead of starting their own.
    """
    key = (case_id, params, dt, t_final, sample_every)
    with _case_locks_guard:
        lock = _case_locks.setdefault(key, threading.Lock())
    with lock:
        return _solve_case(*key)


@lru_cache(maxsize=16)
def _solve_case(case_id, params, dt, t_final, sample_every):
    try:
        return march(problem_factory(case_id, params), TimeConfig(dt=dt, t_final=t_final), sample_every=sample_every)
    except NumericalFailure as exc:
        logger.warning("%s run (dt=%g, T=%g) failed: %s", case_id, dt, t_final, exc)
        return FailedRun(exc)


def _on(solution, compute):
    if isinstance(solution, FailedRun):
        return math.nan, ''
    return measure(lambda: compute(solution))


def _report_pair(solution, time, component):
    report = solution_error(solution, time=time, component=component)
    return report.l2, report.linf


def _point_value(solution, point, time, component='u'):
    return point_table(solution, None, [point], time, component)[0].computed


def _pair(solution, time, component='u'):
    """(L2, Linf) at ``time`` with a note, NaN pair on failure."""
    if isinstance(solution, FailedRun):
        return (math.nan, math.nan), ''
    try:
        return _report_pair(solution, time, component), ''
    except EvaluationError as exc:
        return (math.nan, math.nan), str(exc)
    except NumericalFailure as exc:
        logger.warning("norm computation failed: %s", exc)
        return (math.nan, math.nan), ''


def _norm_pair_cells(table_id, key, solution, time, published, factor, component='u'):
    (l2, linf), note = _pair(solution, time, component)
    l2_pub, linf_pub = published
    return [
        bound_cell(table_id, key, 'L2', l2, l2_pub, factor, note=note),
        bound_cell(table_id, key, 'Linf', linf, linf_pub, factor, note=note),
    ]


# ============================================================================
# 1D TABLES
# ============================================================================

def _table_1_tasks():
    data = reference.TABLE_1

    def task(reynolds):
        def run():
            solution = solve_case('1d-wood', CaseParams(sigma=2.0, reynolds=reynolds, m_nodes=40), 1e-4, 1e-3, 10)
            nu = 1.0 / reynolds
            value_tol, exact_tol, display = (5e-5, 1e-5, '.6f') if reynolds == 1.0 else (1e-6, 1e-6, '.9f')
            cells = []
            for x in reference.POINTS_1D:
                key = (reynolds, f"{x:g}")
                computed, note = _on(solution, lambda s: _point_value(s, x, 1e-3))
                cells.append(within_cell(1, key, 'u', computed, data['computed'][reynolds][x], value_tol, display, note))
                exact, note = measure(lambda: wood_exact(x, 1e-3, nu, 2.0))
                cells.append(within_cell(1, key, 'exact', exact, data['exact'][reynolds][x], exact_tol, display, note))
            l2_pub, linf_pub = data['norms'][reynolds]
            pair, note = _pair(solution, 1e-3)
            cells.append(bound_cell(1, (reynolds, 'L2'), 'norm', pair[0], l2_pub, NORM_FACTOR_1D, note=note))
            cells.append(bound_cell(1, (reynolds, 'Linf'), 'norm', pair[1], linf_pub, NORM_FACTOR_1D, note=note))
            return cells
        return run

    return [task(1.0), task(10.0)]


def _table_2_tasks():
    def task(reynolds, n):
        def run():
            solution = solve_case('1d-wood', CaseParams(sigma=100.0, reynolds=reynolds, m_nodes=n), 0.01, 1.0, 100)
            return _norm_pair_cells(2, (reynolds, n), solution, 1.0, reference.TABLE_2[(reynolds, n)], NORM_FACTOR_1D)
        return run

    return [task(reynolds, n) for reynolds, n in sorted(reference.TABLE_2)]


def _table_3_tasks():
    runs = sorted({(reynolds, n) for _, reynolds, n in reference.TABLE_3})

    def task(reynolds, n):
        def run():
            solution = solve_case('1d-wood', CaseParams(sigma=2.0, reynolds=reynolds, m_nodes=n), 1e-3, 0.5, 100)
            cells = []
            for t in (0.1, 0.5):
                published = reference.TABLE_3[(t, reynolds, n)]
                cells += _norm_pair_cells(3, (t, reynolds, n), solution, t, published, NORM_FACTOR_1D)
            return cells
        return run

    return [task(reynolds, n) for reynolds, n in runs]


def _table_4_tasks():
    def solve(n):
        return solve_case('1d-fourier', CaseParams(reynolds=100.0, m_nodes=n), 1e-3, 3.0, 200)

    def values(n):
        def run():
            solution = solve(n)
            column = f"N={n}"
            cells = []
            for (x, t), published in sorted(reference.TABLE_4.items()):
                computed, note = _on(solution, lambda s: _point_value(s, x, t))
                cells.append(within_cell(4, (x, t), column, computed, published[0 if n == 40 else 1], 2e-5, '.5f', note))
            return cells
        return run

    def errors():
        solution = solve(80)
        cells = []
        for (x, t), published in sorted(reference.TABLE_4.items()):
            exact, note = measure(lambda: fourier_exact(x, t, CaseParams(reynolds=100.0).fourier_params()))
            cells.append(within_cell(4, (x, t), 'exact', exact, published[2], PRINTED_EXACT_TOLERANCE, '.5f', note))
            error, note = _on(solution, lambda s: point_table(s, None, [x], t)[0].abs_error)
            cells.append(bound_cell(4, (x, t), 'abs_error', error, published[3], NORM_FACTOR_1D,
                                    floor=POINT_ERROR_FLOOR_1D, display='.1e', note=note))
        return cells

    return [values(40), values(80), errors]


def _table_5_tasks():
    viscosities = sorted({nu for nu, _ in reference.TABLE_5}, reverse=True)

    def task(nu):
        def run():
            solution = solve_case('1d-fourier', CaseParams(nu=nu, m_nodes=80), 1e-3, 15.0, 5000)
            cells = []
            for t in (5.0, 10.0, 15.0):
                cells += _norm_pair_cells(5, (nu, t), solution, t, reference.TABLE_5[(nu, t)], NORM_FACTOR_1D)
            return cells
        return run

    return [task(nu) for nu in viscosities]


# ============================================================================
# 2D TABLES
# ============================================================================

def _table_6_tasks():
    def run():
        solution = solve_case('2d', CaseParams(reynolds=20.0, m_nodes=16), 1e-3, 1.0, 250)
        cells = []
        for point, published in sorted(reference.TABLE_6.items()):
            for t, value in zip(reference.TABLE_6_TIMES, published):
                error, note = _on(solution, lambda s: point_table(s, None, [point], t)[0].abs_error)
                cells.append(bound_cell(6, point, f"T={t:g}", error, value, NORM_FACTOR_2D,
                                        floor=POINT_ERROR_FLOOR_2D, display='.2e', note=note))
        return cells

    return [run]


def _table_7_tasks():
    grids = sorted({(n, dt) for _, n, dt in reference.TABLE_7})

    def task(n, dt):
        def run():
            sample_every = int(round(0.05 / dt))
            solution = solve_case('2d', CaseParams(reynolds=1.0, m_nodes=n), dt, 0.25, sample_every)
            cells = []
            for t in (0.05, 0.25):
                cells += _norm_pair_cells(7, (t, n, dt), solution, t, reference.TABLE_7[(t, n, dt)], NORM_FACTOR_2D)
            return cells
        return run

    return [task(n, dt) for n, dt in grids]


def _table_8_tasks():
    reynolds_values = sorted({reynolds for _, reynolds in reference.TABLE_8})

    def task(reynolds):
        def run():
            solution = solve_case('2d', CaseParams(reynolds=reynolds, m_nodes=16), 5e-4, 10.0, 2000)
            cells = []
            for t in (3.0, 5.0, 10.0):
                published = reference.TABLE_8[(t, reynolds)]
                cells += _norm_pair_cells(8, (t, reynolds), solution, t, published, NORM_FACTOR_2D)
            return cells
        return run

    return [task(reynolds) for reynolds in reynolds_values]


# ============================================================================
# COUPLED TABLES
# ============================================================================

COUPLED_PARAMS = CaseParams(reynolds=100.0, m_nodes=20)


def _coupled_run():
    # one run to T=4 serves the norm table and both point tables
    return solve_case('coupled', COUPLED_PARAMS, 1e-3, 4.0, 500)


def _table_9_tasks():
    def run():
        solution = _coupled_run()
        cells = []
        for t, published in sorted(reference.TABLE_9.items()):
            cells += _norm_pair_cells(9, (t,), solution, t, published, NORM_FACTOR_2D)
        return cells

    return [run]


def _coupled_point_tasks(table_id, data, component):
    index = 0 if component == 'u' else 1

    def run():
        solution = _coupled_run()
        cells = []
        for point, published in sorted(data.items()):
            for t, label, offset in ((0.5, 't0.5', 0), (2.0, 't2', 2)):
                computed, note = _on(solution, lambda s: _point_value(s, point, t, component))
                cells.append(within_cell(table_id, point, label, computed, published[offset],
                                         COUPLED_VALUE_TOLERANCE, '.5f', note))
                exact = float(exact_coupled(point[0], point[1], t, COUPLED_PARAMS.reynolds)[index])
                cells.append(within_cell(table_id, point, f"exact_{label}", exact, published[offset + 1],
                                         PRINTED_EXACT_TOLERANCE, '.5f'))
        return cells

    return [run]


# ============================================================================
# REGISTRY
# ============================================================================

TABLES = {
    1: TableSpec(1, "1d-wood point values, sigma=2, N=40, dt=1e-4, T=1e-3", ('Re', 'x'),
                 ('u', 'exact', 'norm'), _table_1_tasks),
    2: TableSpec(2, "1d-wood error norms, sigma=100, T=1, dt=0.01", ('Re', 'N'),
                 ('L2', 'Linf'), _table_2_tasks),
    3: TableSpec(3, "1d-wood error norms, sigma=2, dt=1e-3", ('T', 'Re', 'N'),
                 ('L2', 'Linf'), _table_3_tasks),
    4: TableSpec(4, "1d-fourier point values, Re=100, dt=1e-3", ('x', 't'),
                 ('N=40', 'N=80', 'exact', 'abs_error'), _table_4_tasks),
    5: TableSpec(5, "1d-fourier error norms, N=80, dt=1e-3", ('nu', 'T'),
                 ('L2', 'Linf'), _table_5_tasks),
    6: TableSpec(6, "2d absolute errors, Re=20, 16x16, dt=1e-3", ('x', 'y'),
                 ('T=0.5', 'T=0.75', 'T=1'), _table_6_tasks),
    7: TableSpec(7, "2d error norms, Re=1", ('T', 'grid', 'dt'),
                 ('L2', 'Linf'), _table_7_tasks),
    8: TableSpec(8, "2d error norms, 16x16, dt=5e-4", ('T', 'Re'),
                 ('L2', 'Linf'), _table_8_tasks),
    9: TableSpec(9, "coupled u error norms, Re=100, N=20, dt=1e-3", ('T',),
                 ('L2', 'Linf'), _table_9_tasks),
    10: TableSpec(10, "coupled u point values, Re=100, 20x20, dt=1e-3", ('x', 'y'),
                  ('t0.5', 'exact_t0.5', 't2', 'exact_t2'),
                  lambda: _coupled_point_tasks(10, reference.TABLE_10, 'u')),
    11: TableSpec(11, "coupled v point values, Re=100, 20x20, dt=1e-3", ('x', 'y'),
                  ('t0.5', 'exact_t0.5', 't2', 'exact_t2'),
                  lambda: _coupled_point_tasks(11, reference.TABLE_11, 'v')),
}


def get_table(table_id):
    try:
        return TABLES[int(table_id)]
    except (KeyError, TypeError, ValueError):
        raise InvalidArgument(f"table must be one of 1..{len(TABLES)}, got {table_id!r}") from None


def reproduce_table(table_id, jobs=1):
    """Run every task of a table (``jobs`` at a time) and return its sorted cells."""
    spec = get_table(table_id)
    if int(jobs) < 1:
        raise InvalidArgument(f"jobs must be >= 1, got {jobs!r}")
    tasks = spec.tasks()
    logger.info("table %d: %d task(s) on %d worker(s)", spec.table_id, len(tasks), jobs)

    if jobs == 1:
        batches = [task() for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            batches = list(pool.map(lambda task: task(), tasks))

    column_order = {name: i for i, name in enumerate(spec.columns)}
    cells = sorted(
        (cell for batch in batches for cell in batch),
        key=lambda cell: (cell.key, column_order[cell.column]),
    )
    return TableResult(spec=spec, cells=tuple(cells))
