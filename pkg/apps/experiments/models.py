# apps/experiments/models.py
import logging

from django.conf import settings
from django.core.serializers.json import DjangoJSONEncoder
from django.db import DatabaseError, models, transaction
from django_extensions.db.models import TimeStampedModel

logger = logging.getLogger(__name__)


class SimulationRun(TimeStampedModel):
    """
    Ledger of every command invocation: what ran, how it ended, and where
    its artifacts went. created/modified come from TimeStampedModel.
    """

    KIND_CHOICES = [
        ('SOLVE', 'Solve'),
        ('STABILITY', 'Stability Sweep'),
        ('REPRODUCE', 'Table Reproduction'),
    ]

    STATUS_CHOICES = [
        # Success
        ('OK', 'Completed'),

        # Ran to completion but missed a tolerance
        ('TOLERANCE_FAILURE', 'Tolerance Failure'),

        # Did not run
        ('CONFIG_ERROR', 'Configuration Error'),
        ('NUMERICAL_FAILURE', 'Numerical Failure'),
    ]

    # What
    kind = models.CharField(
        max_length=20,
        choices=KIND_CHOICES,
        help_text="Which command produced this row"
    )
    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default='OK',
        help_text="How the invocation ended"
    )
    model = models.CharField(
        max_length=20,
        blank=True,
        help_text="burgers1d, burgers2d, coupled or a stability sweep model"
    )
    case_id = models.CharField(
        max_length=20,
        blank=True,
        help_text="Exact-solution case (solve only)"
    )
    table_id = models.PositiveSmallIntegerField(
        null=True,
        blank=True,
        help_text="Published table number (reproduce only)"
    )

    # Inputs
    config = models.JSONField(
        default=dict,
        encoder=DjangoJSONEncoder,
        blank=True,
        help_text="Echo of the validated configuration"
    )

    # Results
    l2 = models.FloatField(
        null=True,
        blank=True,
        help_text="L2 error at the final time"
    )
    linf = models.FloatField(
        null=True,
        blank=True,
        help_text="Linf error at the final time"
    )
    wall_time = models.FloatField(
        null=True,
        blank=True,
        help_text="Wall-clock seconds"
    )
    output_dir = models.CharField(
        max_length=500,
        blank=True,
        help_text="Directory the artifacts were written to"
    )

    # Failure details
    reason = models.CharField(
        max_length=40,
        blank=True,
        help_text="Machine-readable reason code when the run failed"
    )
    message = models.TextField(
        blank=True,
        help_text="Human-readable outcome"
    )

    # Additional Context (JSON)
    metadata = models.JSONField(
        default=dict,
        encoder=DjangoJSONEncoder,
        blank=True,
        help_text="Command statistics (JSON format)"
    )

    class Meta(TimeStampedModel.Meta):
        db_table = 'simulation_runs'
        ordering = ['-created']
        verbose_name = 'Simulation Run'
        verbose_name_plural = 'Simulation Runs'
        indexes = [
            models.Index(fields=['kind', 'created'], name='simrun_kind_created_idx'),
            models.Index(fields=['status'], name='simrun_status_idx'),
        ]

    def __str__(self):
        subject = self.case_id or self.model or (f"table {self.table_id}" if self.table_id else '')
        return f"[{self.status}] {self.get_kind_display()} {subject}".rstrip()

    @property
    def succeeded(self):
        return self.status == 'OK'

    @classmethod
    def log_run(cls, kind, status='OK', config=None, l2=None, linf=None, wall_time=None,
                output_dir='', reason='', message='', metadata=None, **identity):
        """
        Convenient method to record an invocation

        Usage:
            SimulationRun.log_run(
                kind='SOLVE',
                config=cfg.to_dict(),
                l2=summary['l2'],
                linf=summary['linf'],
                model='burgers1d',
                case_id='1d-wood',
            )

        Returns None when recording is switched off (BURGERS_RECORD_RUNS)
        or the database refuses the row.
        """
        if not getattr(settings, 'BURGERS_RECORD_RUNS', True):
            return None
        try:
            with transaction.atomic():
                return cls.objects.create(
                    kind=kind,
                    status=status,
                    config=config or {},
                    l2=l2,
                    linf=linf,
                    wall_time=wall_time,
                    output_dir=str(output_dir),
                    reason=reason,
                    message=message,
                    metadata=metadata or {},
                    **identity,
                )
        except DatabaseError as exc:
            logger.warning("could not record %s run: %s", kind, exc)
            return None
