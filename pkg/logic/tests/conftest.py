from django.contrib.auth.models import User
from rest_framework.test import APIClient
import pytest

from logic.formats import parse_structure
from logic.grammar import parse_formula
from logic.quantifiers import QuantifierRegistry
from logic.semantics import EvalConfig, eval_bounded, eval_team
from logic.structures import Team


@pytest.fixture
def api_client():
    return APIClient()


@pytest.fixture
def authenticate(api_client):
    def do_authenticate(is_staff=False):
        return api_client.force_authenticate(user=User(is_staff=is_staff))

    return do_authenticate


@pytest.fixture
def structure():
    def do_structure(text):
        return parse_structure(text)

    return do_structure


@pytest.fixture
def team():
    def do_team(variables, *rows):
        return Team.of(set(variables), rows)

    return do_team


@pytest.fixture
def evaluate():
    def do_evaluate(structure, team, text, registry=None, bounded=None, **config):
        registry = registry or QuantifierRegistry.builtin()
        if bounded:
            config["bounded"] = bounded
        check = eval_bounded if bounded else eval_team
        return check(structure, team, parse_formula(text), EvalConfig(**config), registry)

    return do_evaluate
