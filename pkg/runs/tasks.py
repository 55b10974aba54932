import logging

from celery import shared_task
from django.utils import timezone

from logic import services
from logic.verify import run_suite as run_theorem_suite

from .models import SuiteRun
from .signals import suite_finished

logger = logging.getLogger(__name__)


@shared_task
def run_suite(run_id):
    run = SuiteRun.objects.get(pk=run_id)
    run.status = SuiteRun.STATUS_RUNNING
    run.save(update_fields=["status"])
    try:
        verdict = run_theorem_suite(
            run.suite,
            bounds=services.search_bounds(run.size, run.extra, run.seed),
            count=run.corpus_size,
            registry=services.registry(),
            config=services.eval_config(),
        )
    except Exception as error:
        logger.exception("suite run %s crashed", run.pk)
        run.status = SuiteRun.STATUS_ERROR
        run.report = f"{type(error).__name__}: {error}"
    else:
        run.status = SuiteRun.STATUS_HOLDS if verdict.holds else SuiteRun.STATUS_FAILS
        run.cases = verdict.cases
        run.report = "\n".join(services.verdict_lines(f"SUITE {run.suite}", verdict))
    run.finished_at = timezone.now()
    run.save()
    suite_finished.send_robust(sender=SuiteRun, run=run)
    return run.status
