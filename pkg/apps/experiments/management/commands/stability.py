# apps/experiments/management/commands/stability.py
"""
Frozen-coefficient stability sweep over grid sizes.

    python manage.py stability --model burgers1d --sizes 10,17,24,31 --nu 1 --frozen zero
    python manage.py stability --sizes 20 --nu 0.1 --case 1d-wood --sigma 2
    python manage.py stability --model coupled --sizes 10 --re 100 --frozen initial

Writes spectra.csv (one row per eigenvalue) and stability_summary.json.
Exit codes: 0 ok, 2 configuration error or unwritable --out, 3 eigensolver failure.
"""

import time
from pathlib import Path

from django.conf import settings
from django.utils import timezone

from apps.collocation.exceptions import BurgersError
from apps.experiments.forms import SWEEP_FIELDS, StabilitySweepForm, validate
from apps.experiments.models import SimulationRun
from apps.experiments.writers import dumps_line, write_json, write_spectra
from apps.stability.spectra import stability_sweep

from ._base import BurgersCommand

SPECTRA_FILE = 'spectra.csv'
SUMMARY_FILE = 'stability_summary.json'


class Command(BurgersCommand):
    help = 'Eigenvalue sweep of the frozen-coefficient semi-discrete operators'
    kind = 'STABILITY'

    def add_arguments(self, parser):
        parser.add_argument('--model', default='burgers1d', help='burgers1d, coupled, weights-x or weights-y')
        parser.add_argument('--sizes', default='', help='Comma-separated grid sizes, e.g. 10,17,24,31')
        parser.add_argument('--nu', type=float, help='Viscosity')
        parser.add_argument('--re', dest='reynolds', type=float, help='Reynolds number')
        parser.add_argument('--frozen', help='Frozen velocity: initial (default) or zero')
        parser.add_argument('--case', dest='case_id', help='1D initial state: 1d-fourier (default) or 1d-wood')
        parser.add_argument('--sigma', type=float, help='sigma > 1 when freezing at 1d-wood data')
        parser.add_argument('--alpha', type=float, help='Advection coefficient of the 1D operator (default 1)')
        parser.add_argument('--order', type=int, help='Derivative order of the weighting blocks: 1 or 2')
        parser.add_argument('--out', dest='output_dir', help='Artifact directory')

    def handle(self, *args, **options):
        self.banner('🔬 STABILITY SWEEP')

        data = {
            name: options.get(name)
            for name in SWEEP_FIELDS
            if options.get(name) is not None
        }
        form = StabilitySweepForm(data=data)
        try:
            params = validate(form)
        except BurgersError as exc:
            self.abort(exc, config=data, model=str(data.get('model', '')))

        echo = {key: value for key, value in params.items() if value not in (None, '')}
        output_dir = Path(params['output_dir'] or settings.BURGERS_OUTPUT_DIR)

        started = time.perf_counter()
        try:
            reports = stability_sweep(
                params['model'],
                params['sizes'],
                form.sweep_parameter(),
                frozen=params['frozen'],
                alpha=params['alpha'],
                order=params['order'],
                case=params['case_id'],
                sigma=params['sigma'],
            )
        except BurgersError as exc:
            self.abort(exc, config=echo, model=params['model'])
        wall_time = time.perf_counter() - started

        summary = {
            'model': params['model'],
            'frozen': params['frozen'],
            'case_id': params['case_id'],
            'parameter': form.sweep_parameter(),
            'all_stable': all(report.verdict for report in reports),
            'reports': [
                {
                    'size': report.size,
                    'eigenvalues': report.eigenvalue_count,
                    'max_real_part': report.max_real_part,
                    'tolerance': report.tolerance,
                    'verdict': report.verdict,
                }
                for report in reports
            ],
            'wall_time_s': wall_time,
            'config': echo,
            'finished_at': timezone.now(),
        }
        spectra_path = output_dir / SPECTRA_FILE
        try:
            write_spectra(spectra_path, reports)
            summary_path = write_json(output_dir / SUMMARY_FILE, summary)
        except BurgersError as exc:
            self.abort(exc, config=echo, model=params['model'])

        self.stdout.write(dumps_line(summary))
        self.print_summary(summary, spectra_path, summary_path)

        SimulationRun.log_run(
            kind=self.kind,
            config=echo,
            wall_time=wall_time,
            output_dir=output_dir,
            message='all stable' if summary['all_stable'] else 'positive real part found',
            metadata={'all_stable': summary['all_stable'], 'sizes': params['sizes']},
            model=params['model'],
        )

    def print_summary(self, summary, spectra_path, summary_path):
        """Print one verdict line per grid size"""
        self.info('\n' + '=' * 70)
        self.info('📊 SUMMARY', self.style.SUCCESS)
        self.info('=' * 70 + '\n')

        for report in summary['reports']:
            verdict = self.style.SUCCESS('stable') if report['verdict'] else self.style.ERROR('UNSTABLE')
            self.summary_line(
                f"M={report['size']} ({report['eigenvalues']} eigenvalues), max Re",
                f"{report['max_real_part']:.3e}  {verdict}",
            )
        self.summary_line('Spectra file', spectra_path)
        self.summary_line('Summary file', summary_path)

        self.info('\n' + '=' * 70 + '\n')
