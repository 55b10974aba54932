import logging

from django.dispatch import receiver

from runs.signals import suite_finished

logger = logging.getLogger(__name__)


@receiver(suite_finished)
def log_finished_run(sender, **kwargs):
    run = kwargs["run"]
    if run.status == run.STATUS_ERROR:
        logger.error("suite run %s ended in error", run.pk)
    else:
        logger.info("suite run %s: %s %s after %d cases", run.pk, run.suite, run.status, run.cases)
