from django.urls import path

from . import views

# URLConf
urlpatterns = [
    path("evaluate/", views.EvaluateView.as_view(), name="evaluate"),
    path("meaning/", views.MeaningView.as_view(), name="meaning"),
    path("equivalence/", views.EquivalenceView.as_view(), name="equivalence"),
    path("prenex/", views.PrenexView.as_view(), name="prenex"),
    path("quantifiers/", views.QuantifierListView.as_view(), name="quantifiers"),
    path("quantifiers/<str:name>/", views.QuantifierDetailView.as_view(), name="quantifier-detail"),
]
