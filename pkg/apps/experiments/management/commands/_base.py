# apps/experiments/management/commands/_base.py
"""
Shared plumbing for the solve / stability / reproduce commands.

Standard output carries only the machine result. Banners, progress and
summaries go to standard error and respect --verbosity.
"""

from django.core.management.base import BaseCommand, CommandError

from apps.collocation.exceptions import NumericalFailure
from apps.experiments.models import SimulationRun

EXIT_TOLERANCE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


class BurgersCommand(BaseCommand):
    kind = None
    stealth_options = ('stdin',)

    def execute(self, *args, **options):
        self.verbosity = options.get('verbosity', 1)
        return super().execute(*args, **options)

    # ─────────────────────────────────────────────
    # Output helpers
    # ─────────────────────────────────────────────

    def banner(self, title):
        if self.verbosity < 1:
            return
        self.stderr.write(self.style.SUCCESS('\n' + '=' * 70))
        self.stderr.write(self.style.SUCCESS(title))
        self.stderr.write(self.style.SUCCESS('=' * 70 + '\n'))

    def info(self, message, style=None):
        if self.verbosity >= 1:
            self.stderr.write(style(message) if style else message)

    def detail(self, message):
        if self.verbosity >= 2:
            self.stderr.write(message)

    def summary_line(self, label, value):
        self.info(f"{label + ':':.<50} {value}")

    # ─────────────────────────────────────────────
    # Failure handling
    # ─────────────────────────────────────────────

    def abort(self, exc, config=None, **identity):
        """Record the failed invocation and exit 2 (bad input) or 3 (numerical failure)."""
        numerical = isinstance(exc, NumericalFailure)
        SimulationRun.log_run(
            kind=self.kind,
            status='NUMERICAL_FAILURE' if numerical else 'CONFIG_ERROR',
            config=config,
            reason=exc.reason,
            message=exc.message,
            **identity,
        )
        returncode = EXIT_NUMERICAL_FAILURE if numerical else EXIT_CONFIG_ERROR
        raise CommandError(' '.join(str(exc).split()), returncode=returncode) from exc
