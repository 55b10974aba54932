from django_filters.rest_framework import DjangoFilterBackend
from rest_framework.filters import OrderingFilter, SearchFilter
from rest_framework.response import Response
from rest_framework.viewsets import ModelViewSet

from .filters import SuiteRunFilter
from .models import SuiteRun
from .pagination import DefaultPagination
from .permissions import IsAdminOrReadOnly
from .serializers import (
    CreateSuiteRunSerializer,
    SuiteRunDetailSerializer,
    SuiteRunSerializer,
)
from .tasks import run_suite


class SuiteRunViewSet(ModelViewSet):
    queryset = SuiteRun.objects.all()
    http_method_names = ["get", "post", "delete", "head", "options"]
    filter_backends = [DjangoFilterBackend, SearchFilter, OrderingFilter]
    filterset_class = SuiteRunFilter
    pagination_class = DefaultPagination
    permission_classes = [IsAdminOrReadOnly]
    search_fields = ["suite", "report"]
    ordering_fields = ["created_at", "cases"]

    def get_serializer_class(self):
        if self.request.method == "POST":
            return CreateSuiteRunSerializer
        if self.action == "retrieve":
            return SuiteRunDetailSerializer
        return SuiteRunSerializer

    def create(self, request, *args, **kwargs):
        serializer = CreateSuiteRunSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        run = serializer.save()
        run_suite.delay(run.pk)
        run.refresh_from_db()
        return Response(SuiteRunDetailSerializer(run).data, status=201)
