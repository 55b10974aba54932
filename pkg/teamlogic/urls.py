from django.contrib import admin
from django.urls import path, include

admin.site.site_header = "Team Logic Admin"
admin.site.site_title = "Team Logic Admin Portal"
admin.site.index_title = "Theorem suite runs"


urlpatterns = [
    path("admin/", admin.site.urls),
    path("logic/", include("logic.urls")),
    path("runs/", include("runs.urls")),
]
