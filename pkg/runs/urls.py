from rest_framework.routers import SimpleRouter

from . import views

router = SimpleRouter()
router.register("", views.SuiteRunViewSet, basename="runs")

# URLConf
urlpatterns = router.urls
