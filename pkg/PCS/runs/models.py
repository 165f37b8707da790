import logging

from django.core.exceptions import ValidationError
from django.db import DatabaseError, models, transaction

logger = logging.getLogger(__name__)


class AnalysisRun(models.Model):
    """
    One invocation of a PCS command.
    Rows are written once and never edited.
    """
    COMMAND_CHOICES = [
        ('barcode', 'Barcode'),
        ('distances', 'Distance bounds'),
        ('validate', 'Filtration validation'),
        ('ledger', 'Product ledger'),
        ('stability', 'Stability check'),
    ]

    STATUS_CHOICES = [
        ('completed', 'Completed'),
        ('failed', 'Failed'),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default='completed')
    arguments = models.JSONField(default=dict, help_text='Options the command ran with')
    summary = models.JSONField(default=dict, help_text='Headline numbers or the error message')
    outputs = models.JSONField(default=list, help_text='Files written by the run')

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = 'Analysis Run'
        verbose_name_plural = 'Analysis Runs'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', '-created_at'], name='runs_command_created_idx'),
        ]

    def __str__(self):
        return f"{self.command} ({self.status}) at {self.created_at:%Y-%m-%d %H:%M:%S}"

    def save(self, *args, **kwargs):
        """Insert only."""
        if not self._state.adding:
            raise ValidationError('Analysis runs are append-only.', code='unsupported')
        super().save(*args, **kwargs)

    @classmethod
    def record(cls, command, status, arguments=None, summary=None, outputs=None):
        """Store a run; an unusable database only costs a warning."""
        try:
            with transaction.atomic():
                return cls.objects.create(
                    command=command, status=status, arguments=arguments or {},
                    summary=summary or {}, outputs=[str(p) for p in outputs or []],
                )
        except DatabaseError as exc:
            logger.warning('Run of %s not recorded: %s', command, exc)
            return None
