# apps/experiments/runner.py
"""
Execute one configured solve and write its artifacts:

    <output_dir>/snapshots.csv   every recorded snapshot against the exact solution
    <output_dir>/summary.json    final-time norms, wall time and the config echo
"""

import logging
import time
from dataclasses import dataclass
from pathlib import Path

from django.utils import timezone

from apps.metrics.norms import max_sum_drift, point_table, solution_error
from apps.oracles.exact import problem_factory
from apps.solver.stepper import march

from .writers import write_json, write_snapshots

logger = logging.getLogger(__name__)

SNAPSHOTS_FILE = 'snapshots.csv'
SUMMARY_FILE = 'summary.json'


@dataclass
class RunResult:
    solution: object
    summary: dict
    snapshots_path: Path
    summary_path: Path


def build_summary(cfg, solution, wall_time):
    summary = {
        'model': cfg.model,
        'case_id': cfg.case_id,
        't_final': cfg.t_final,
        'n_steps': solution.config.n_steps,
        'sample_count': solution.sample_count,
        'wall_time_s': wall_time,
        'config': cfg.to_dict(),
        'finished_at': timezone.now(),
    }
    summary.update(solution_error(solution).as_summary())

    if cfg.is_coupled:
        v_report = solution_error(solution, component='v')
        summary['v_l2'] = v_report.l2
        summary['v_linf'] = v_report.linf
        summary['max_sum_drift'] = max_sum_drift(solution)

    if cfg.emit_pointwise:
        points = list(zip(*solution.coordinates()))
        components = ('u', 'v') if cfg.is_coupled else ('u',)
        summary['pointwise'] = {
            component: [row.as_dict() for row in point_table(solution, None, points, cfg.t_final, component)]
            for component in components
        }
    return summary


def execute_run(cfg, progress=None, progress_every=500):
    """March ``cfg`` and write snapshots.csv and summary.json into cfg.output_dir."""
    problem = problem_factory(cfg.case_id, cfg.case_params())
    output_dir = Path(cfg.output_dir)

    started = time.perf_counter()
    solution = march(
        problem,
        cfg.time_config(),
        sample_every=cfg.sample_every,
        progress=progress,
        progress_every=progress_every,
    )
    wall_time = time.perf_counter() - started

    summary = build_summary(cfg, solution, wall_time)
    snapshots_path = output_dir / SNAPSHOTS_FILE
    rows = write_snapshots(snapshots_path, solution)
    summary_path = write_json(output_dir / SUMMARY_FILE, summary)
    logger.info("wrote %d snapshot rows to %s", rows, snapshots_path)

    return RunResult(solution=solution, summary=summary, snapshots_path=snapshots_path, summary_path=summary_path)
