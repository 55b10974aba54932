from django.core.validators import MaxValueValidator, MinValueValidator
from django.db import models

from logic.verify import SUITES


class SuiteRun(models.Model):
    STATUS_PENDING = "pending"
    STATUS_RUNNING = "running"
    STATUS_HOLDS = "holds"
    STATUS_FAILS = "fails"
    STATUS_ERROR = "error"
    STATUS_CHOICES = [
        (STATUS_PENDING, "Pending"),
        (STATUS_RUNNING, "Running"),
        (STATUS_HOLDS, "Holds"),
        (STATUS_FAILS, "Fails"),
        (STATUS_ERROR, "Error"),
    ]
    FINISHED = [STATUS_HOLDS, STATUS_FAILS, STATUS_ERROR]

    suite = models.CharField(max_length=64, choices=[(name, name) for name in sorted(SUITES)])
    size = models.PositiveSmallIntegerField(
        default=3, validators=[MinValueValidator(1), MaxValueValidator(4)]
    )
    extra = models.PositiveSmallIntegerField(default=1, validators=[MaxValueValidator(2)])
    seed = models.IntegerField(default=0)
    corpus_size = models.PositiveIntegerField(
        null=True,
        blank=True,
        validators=[MinValueValidator(1)],
        help_text="Empty runs the suite's own corpus size.",
    )
    status = models.CharField(max_length=8, choices=STATUS_CHOICES, default=STATUS_PENDING)
    cases = models.PositiveIntegerField(default=0)
    report = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    def __str__(self) -> str:
        return f"{self.suite} #{self.pk} ({self.status})"

    @property
    def finished(self) -> bool:
        return self.status in self.FINISHED

    class Meta:
        ordering = ["-created_at"]
