from rest_framework import serializers

from .models import SuiteRun


class SuiteRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SuiteRun
        fields = [
            "id",
            "suite",
            "size",
            "extra",
            "seed",
            "corpus_size",
            "status",
            "cases",
            "created_at",
            "finished_at",
        ]


class SuiteRunDetailSerializer(SuiteRunSerializer):
    class Meta(SuiteRunSerializer.Meta):
        fields = SuiteRunSerializer.Meta.fields + ["report"]


class CreateSuiteRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SuiteRun
        fields = ["id", "suite", "size", "extra", "seed", "corpus_size"]
