from logic import services
from logic.semantics import Mode


class TestEvalConfig:
    def test_defaults(self):
        config = services.eval_config()

        assert config.mode == Mode.LAX
        assert config.empty_function_ban
        assert config.max_choice_functions == 65536
        assert config.max_meaning_classes == 4
        assert config.max_meaning_domain == 4

    def test_guards_follow_the_settings(self, settings):
        settings.LOGIC = {**settings.LOGIC, "MAX_MEANING_CLASSES": 6, "EMPTY_FUNCTION_BAN": False}

        config = services.eval_config(strict=True)

        assert config.mode == Mode.STRICT
        assert config.max_meaning_classes == 6
        assert not config.empty_function_ban


class TestSearchBounds:
    def test_flags_override_the_settings(self, settings):
        settings.LOGIC = {**settings.LOGIC, "SEARCH_SIZE": 2}

        assert services.search_bounds().size == 2
        assert services.search_bounds(size=4).size == 4
        assert services.search_bounds().max_structures == 512
