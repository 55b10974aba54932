from django.contrib import admin, messages
from django.db.models.query import QuerySet

from . import models
from .tasks import run_suite


class OutcomeFilter(admin.SimpleListFilter):
    title = "outcome"
    parameter_name = "outcome"

    def lookups(self, request, model_admin):
        return [("finished", "Finished"), ("open", "Not finished")]

    def queryset(self, request, queryset: QuerySet):
        if self.value() == "finished":
            return queryset.filter(status__in=models.SuiteRun.FINISHED)
        if self.value() == "open":
            return queryset.exclude(status__in=models.SuiteRun.FINISHED)


@admin.register(models.SuiteRun)
class SuiteRunAdmin(admin.ModelAdmin):
    actions = ["rerun"]
    list_display = ["id", "suite", "size", "extra", "seed", "corpus_size", "status", "cases", "created_at"]
    list_filter = ["suite", "status", OutcomeFilter]
    list_per_page = 10
    readonly_fields = ["status", "cases", "report", "finished_at"]
    search_fields = ["suite", "report"]

    @admin.action(description="Run again")
    def rerun(self, request, queryset):
        for run in queryset:
            run.status = models.SuiteRun.STATUS_PENDING
            run.save(update_fields=["status"])
            run_suite.delay(run.pk)
        self.message_user(
            request, f"{queryset.count()} runs were queued.", messages.SUCCESS
        )
