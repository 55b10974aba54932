from .celery import celery
