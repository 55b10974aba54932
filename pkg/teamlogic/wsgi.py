"""WSGI entry point serving the evaluation API and the suite-run endpoints."""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "teamlogic.settings")

application = get_wsgi_application()
