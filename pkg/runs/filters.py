from django_filters.rest_framework import FilterSet

from .models import SuiteRun


class SuiteRunFilter(FilterSet):
    class Meta:
        model = SuiteRun
        fields = {"suite": ["exact"], "status": ["exact"], "size": ["exact", "lte"]}
