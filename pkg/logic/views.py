import logging

from django.utils.decorators import method_decorator
from django.views.decorators.cache import cache_page
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView

from . import services
from .exceptions import LogicError
from .serializers import (
    EquivalenceSerializer,
    EvaluateSerializer,
    MeaningSerializer,
    PrenexSerializer,
)

logger = logging.getLogger(__name__)


class SerializerActionView(APIView):
    serializer_class = None

    def post(self, request):
        serializer = self.serializer_class(data=request.data)
        serializer.is_valid(raise_exception=True)
        return Response(serializer.save())


class EvaluateView(SerializerActionView):
    serializer_class = EvaluateSerializer


class MeaningView(SerializerActionView):
    serializer_class = MeaningSerializer


class EquivalenceView(SerializerActionView):
    serializer_class = EquivalenceSerializer


class PrenexView(SerializerActionView):
    serializer_class = PrenexSerializer


class QuantifierListView(APIView):
    def get(self, request):
        return Response(services.quantifier_names(services.registry()))


class QuantifierDetailView(APIView):
    @method_decorator(cache_page(60 * 15))
    def get(self, request, name):
        try:
            size = int(request.query_params.get("size", 3))
        except ValueError:
            return Response({"size": "Must be an integer."}, status=status.HTTP_400_BAD_REQUEST)
        if not 1 <= size <= 4:
            return Response(
                {"size": "Must be between 1 and 4."}, status=status.HTTP_400_BAD_REQUEST
            )
        try:
            info = services.quantifier_info(name, size, services.registry())
        except LogicError as error:
            logger.info("quantifier lookup failed: %s", error)
            return Response({"error": str(error)}, status=status.HTTP_404_NOT_FOUND)
        return Response(info)
