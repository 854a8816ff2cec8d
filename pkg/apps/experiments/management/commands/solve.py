# apps/experiments/management/commands/solve.py
"""
March one Burgers case and score it against its exact solution.

    python manage.py solve --config run.json
    python manage.py solve --model burgers1d --case 1d-wood --sigma 2 --nu 1 \
        --nodes 40 --dt 1e-4 --t-final 1e-3 --out output/wood

Writes snapshots.csv and summary.json into --out, prints the summary as
one JSON line on standard output.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
"""

from django.conf import settings

from apps.collocation.exceptions import BurgersError
from apps.experiments.config import RunConfig, load_config
from apps.experiments.models import SimulationRun
from apps.experiments.runner import execute_run
from apps.experiments.writers import dumps_line
from apps.solver.problems import Model

from ._base import BurgersCommand


class Command(BurgersCommand):
    help = 'March one Burgers case (BDF2 in time, differential quadrature in space) and score it'
    kind = 'SOLVE'

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON run configuration; "-" reads standard input')
        parser.add_argument('--model', help='burgers1d, burgers2d or coupled')
        parser.add_argument('--case', dest='case_id', help='1d-wood, 1d-fourier, 1d-zero, 2d or coupled')
        parser.add_argument('--nodes', dest='m_nodes', type=int, help='Nodes per direction')
        parser.add_argument('--mx', type=int, help='Nodes in x (2D)')
        parser.add_argument('--my', type=int, help='Nodes in y (2D)')
        parser.add_argument('--dt', type=float, help='Time step')
        parser.add_argument('--t-final', dest='t_final', type=float, help='Final time (a whole number of steps)')
        parser.add_argument('--sigma', type=float, help='sigma > 1 for case 1d-wood')
        parser.add_argument('--re', dest='reynolds', type=float, help='Reynolds number (or give --nu)')
        parser.add_argument('--nu', type=float, help='Viscosity (or give --re)')
        parser.add_argument('--sample-every', dest='sample_every', type=int, help='Record every k-th step')
        parser.add_argument('--out', dest='output_dir', help='Artifact directory')
        parser.add_argument('--startup', help='implicit (default) or explicit first step')
        parser.add_argument(
            '--pointwise',
            dest='emit_pointwise',
            action='store_true',
            default=None,
            help='Add a per-node table at the final time to summary.json',
        )

    def handle(self, *args, **options):
        self.banner('🌊 BURGERS SOLVE')

        overrides = {name: options.get(name) for name in RunConfig.field_names()}
        try:
            cfg = load_config(options['config'], overrides, stdin=options.get('stdin'))
        except BurgersError as exc:
            self.abort(exc, config={k: v for k, v in overrides.items() if v is not None})

        self.summary_line('Model', cfg.model)
        self.summary_line('Case', cfg.case_id)
        self.summary_line('Steps', f"{cfg.time_config().n_steps} x dt={cfg.dt:g}")

        try:
            result = execute_run(cfg, progress=self._progress_for(cfg), progress_every=settings.BURGERS_PROGRESS_EVERY)
        except BurgersError as exc:
            self.abort(exc, config=cfg.to_dict(), model=cfg.model, case_id=cfg.case_id)

        summary = result.summary
        self.stdout.write(dumps_line(summary))
        self.print_summary(cfg, summary, result)

        SimulationRun.log_run(
            kind=self.kind,
            config=cfg.to_dict(),
            l2=summary['l2'],
            linf=summary['linf'],
            wall_time=summary['wall_time_s'],
            output_dir=cfg.output_dir,
            message=f"{cfg.case_id} solved to t={cfg.t_final:g}",
            metadata={key: summary[key] for key in ('n_steps', 'sample_count', 'n_points', 'v_l2', 'v_linf', 'max_sum_drift') if key in summary},
            model=cfg.model,
            case_id=cfg.case_id,
        )

    def _progress_for(self, cfg):
        if cfg.model == Model.BURGERS_1D.value or self.verbosity < 1:
            return None

        def progress(step, n_steps):
            self.stderr.write(f"  step {step}/{n_steps} (t={step * cfg.dt:g})")

        return progress

    def print_summary(self, cfg, summary, result):
        """Print summary of the run"""
        self.info('\n' + '=' * 70)
        self.info('📊 SUMMARY', self.style.SUCCESS)
        self.info('=' * 70 + '\n')

        self.summary_line('L2 error at t_final', f"{summary['l2']:.3e}")
        self.summary_line('Linf error at t_final', f"{summary['linf']:.3e}")
        if cfg.is_coupled:
            self.summary_line('v L2 error at t_final', f"{summary['v_l2']:.3e}")
            self.summary_line('v Linf error at t_final', f"{summary['v_linf']:.3e}")
            self.summary_line('max |u + v - 3/2|', f"{summary['max_sum_drift']:.3e}")
        self.summary_line('Snapshots recorded', summary['sample_count'])
        self.summary_line('Wall time (s)', f"{summary['wall_time_s']:.3f}")
        self.summary_line('Snapshots file', result.snapshots_path)
        self.summary_line('Summary file', result.summary_path)

        self.info('\n' + '=' * 70 + '\n')
