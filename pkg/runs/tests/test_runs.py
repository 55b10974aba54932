from runs.models import SuiteRun
from runs.signals import suite_finished
from runs.tasks import run_suite
from rest_framework import status
from model_bakery import baker
import pytest


@pytest.fixture
def create_run(api_client):
    def do_create_run(run):
        return api_client.post("/runs/", data=run)

    return do_create_run


@pytest.mark.django_db
class TestCreateRun:
    def test_if_user_is_anonymous_returns_403(self, create_run):
        response = create_run({"suite": "logicality"})

        assert response.status_code == status.HTTP_403_FORBIDDEN

    def test_if_user_is_not_admin_returns_403(self, authenticate, create_run):
        authenticate()

        response = create_run({"suite": "logicality"})

        assert response.status_code == status.HTTP_403_FORBIDDEN

    def test_if_suite_is_unknown_returns_400(self, authenticate, create_run):
        authenticate(is_staff=True)

        response = create_run({"suite": "everything"})

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert response.data["suite"] is not None

    def test_if_size_is_too_large_returns_400(self, authenticate, create_run):
        authenticate(is_staff=True)

        response = create_run({"suite": "logicality", "size": 5})

        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert response.data["size"] is not None

    def test_if_data_is_valid_returns_201(self, authenticate, create_run):
        authenticate(is_staff=True)

        response = create_run({"suite": "logicality", "corpus_size": 1})

        assert response.status_code == status.HTTP_201_CREATED
        assert response.data["id"] is not None
        assert response.data["status"] == SuiteRun.STATUS_HOLDS
        assert response.data["report"].startswith("SUITE logicality HOLDS")
        assert response.data["finished_at"] is not None

    def test_if_corpus_size_is_omitted_the_suite_default_is_used(self, authenticate, create_run):
        authenticate(is_staff=True)

        response = create_run({"suite": "logicality"})

        assert response.status_code == status.HTTP_201_CREATED
        assert response.data["corpus_size"] is None
        assert response.data["status"] == SuiteRun.STATUS_HOLDS


@pytest.mark.django_db
class TestRetrieveRun:
    def test_if_run_exists_returns_200(self, api_client):
        run = baker.make(SuiteRun, suite="empty_team", status=SuiteRun.STATUS_FAILS, report="x")

        response = api_client.get(f"/runs/{run.id}/")

        assert response.status_code == status.HTTP_200_OK
        assert response.data["suite"] == "empty_team"
        assert response.data["status"] == SuiteRun.STATUS_FAILS
        assert response.data["report"] == "x"

    def test_if_run_does_not_exist_returns_404(self, api_client):
        response = api_client.get("/runs/1/")

        assert response.status_code == status.HTTP_404_NOT_FOUND

    def test_list_is_paginated_and_omits_reports(self, api_client):
        baker.make(SuiteRun, suite="logicality", _quantity=12)

        response = api_client.get("/runs/")

        assert response.status_code == status.HTTP_200_OK
        assert response.data["count"] == 12
        assert len(response.data["results"]) == 10
        assert "report" not in response.data["results"][0]

    def test_filter_by_status(self, api_client):
        baker.make(SuiteRun, suite="logicality", status=SuiteRun.STATUS_HOLDS)
        baker.make(SuiteRun, suite="logicality", status=SuiteRun.STATUS_FAILS, _quantity=2)

        response = api_client.get("/runs/?status=fails")

        assert response.data["count"] == 2


@pytest.mark.django_db
class TestDeleteRun:
    def test_if_user_is_not_admin_returns_403(self, authenticate, api_client):
        authenticate()
        run = baker.make(SuiteRun, suite="logicality")

        response = api_client.delete(f"/runs/{run.id}/")

        assert response.status_code == status.HTTP_403_FORBIDDEN

    def test_if_user_is_admin_returns_204(self, authenticate, api_client):
        authenticate(is_staff=True)
        run = baker.make(SuiteRun, suite="logicality")

        response = api_client.delete(f"/runs/{run.id}/")

        assert response.status_code == status.HTTP_204_NO_CONTENT
        assert not SuiteRun.objects.filter(pk=run.id).exists()


@pytest.mark.django_db
class TestRunSuiteTask:
    def test_finished_run_is_announced(self):
        run = baker.make(SuiteRun, suite="logicality", corpus_size=1, status=SuiteRun.STATUS_PENDING)
        announced = []

        def listener(sender, **kwargs):
            announced.append(kwargs["run"].pk)

        suite_finished.connect(listener)
        try:
            result = run_suite(run.pk)
        finally:
            suite_finished.disconnect(listener)

        run.refresh_from_db()
        assert result == SuiteRun.STATUS_HOLDS
        assert run.finished
        assert run.cases > 0
        assert announced == [run.pk]

    def test_crash_is_recorded_as_error(self):
        run = baker.make(SuiteRun, suite="logicality", status=SuiteRun.STATUS_PENDING)
        SuiteRun.objects.filter(pk=run.pk).update(suite="everything")

        result = run_suite(run.pk)

        run.refresh_from_db()
        assert result == SuiteRun.STATUS_ERROR
        assert "unknown suite" in run.report
