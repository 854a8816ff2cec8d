# apps/experiments/management/commands/reproduce.py
"""
Re-run a published error table and compare it cell by cell.

    python manage.py reproduce --table 1
    python manage.py reproduce --table 8 --jobs 3 --out output/tables

Writes table_<K>.csv (computed, published, tolerance and status per
column) and prints the rows rounded to the published precision.

Exit codes: 0 every cell passed or is flagged, 1 at least one cell
failed, 2 unknown table or unwritable --out.
"""

import time
from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from apps.collocation.exceptions import BurgersError
from apps.experiments.models import SimulationRun
from apps.experiments.tables import get_table, reproduce_table
from apps.experiments.writers import write_table

from ._base import EXIT_TOLERANCE_FAILURE, BurgersCommand


class Command(BurgersCommand):
    help = 'Reproduce one of the published error tables (1-11) against embedded reference values'
    kind = 'REPRODUCE'

    def add_arguments(self, parser):
        parser.add_argument('--table', type=int, required=True, help='Table number, 1 to 11')
        parser.add_argument('--out', dest='output_dir', help='Artifact directory')
        parser.add_argument('--jobs', type=int, default=1, help='Independent table cells to run concurrently')

    def handle(self, *args, **options):
        table_id = options['table']
        jobs = options['jobs']
        config = {'table': table_id, 'jobs': jobs}

        spec = None
        try:
            spec = get_table(table_id)
            self.banner(f"📋 TABLE {spec.table_id}: {spec.title}")
            started = time.perf_counter()
            result = reproduce_table(table_id, jobs=jobs)
        except BurgersError as exc:
            self.abort(exc, config=config, table_id=spec.table_id if spec else None)
        wall_time = time.perf_counter() - started

        output_dir = Path(options['output_dir'] or settings.BURGERS_OUTPUT_DIR)
        path = output_dir / f"table_{spec.table_id}.csv"
        try:
            write_table(path, result)
        except BurgersError as exc:
            self.abort(exc, config=config, table_id=spec.table_id)

        self.print_rows(result)
        counts = result.counts()
        self.print_summary(counts, wall_time, path)

        failures = result.failures
        SimulationRun.log_run(
            kind=self.kind,
            status='TOLERANCE_FAILURE' if failures else 'OK',
            config=config,
            wall_time=wall_time,
            output_dir=output_dir,
            reason='tolerance-failure' if failures else '',
            message=f"{counts['pass']} pass, {counts['fail']} fail, {counts['flagged']} flagged",
            metadata=counts,
            table_id=spec.table_id,
        )

        if failures:
            first = failures[0]
            raise CommandError(
                f"tolerance-failure: table {spec.table_id}: {len(failures)} cell(s) out of tolerance "
                f"(first {first.key} {first.column}: {first.computed:.6g} vs published {first.published:.6g})",
                returncode=EXIT_TOLERANCE_FAILURE,
            )

    def print_rows(self, result):
        """Rounded rows on standard output: computed [published] status per column."""
        spec = result.spec
        self.stdout.write('\t'.join(list(spec.key_names) + list(spec.columns)))
        for key, cells in result.rows():
            fields = [f"{value:g}" if isinstance(value, float) else str(value) for value in key]
            for column in spec.columns:
                cell = cells.get(column)
                if cell is None:
                    fields.append('--')
                    continue
                fields.append(f"{cell.rounded(cell.computed) or 'nan'} [{cell.rounded(cell.published)}] {cell.status.value}")
            self.stdout.write('\t'.join(fields))

    def print_summary(self, counts, wall_time, path):
        """Print cell counts"""
        self.info('\n' + '=' * 70)
        self.info('📊 SUMMARY', self.style.SUCCESS)
        self.info('=' * 70 + '\n')

        self.summary_line('Cells within tolerance', counts['pass'])
        self.summary_line('Cells flagged (reference inconsistent)', counts['flagged'])
        if counts['fail']:
            self.info(f"{'Cells out of tolerance:':.<50} {counts['fail']}", self.style.ERROR)
        else:
            self.summary_line('Cells out of tolerance', 0)
        self.summary_line('Wall time (s)', f"{wall_time:.1f}")
        self.summary_line('Table file', path)

        self.info('\n' + '=' * 70 + '\n')
