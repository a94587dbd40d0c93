"""Unit tests for settings."""

from graphinv.config import Settings, get_settings


class TestSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("GRAPHINV_MAX_LATTICE_VERTICES", raising=False)
        settings = Settings(_env_file=None)
        assert settings.max_lattice_vertices == 20
        assert settings.log_level == "WARNING"
        assert settings.threads == 1
        assert settings.ck_tolerance == 1e-12

    def test_environment_override(self, settings_env):
        settings = settings_env(max_lattice_vertices=7, log_json="false", diagram_iso_cap=50)
        assert settings.max_lattice_vertices == 7
        assert settings.log_json is False
        assert settings.diagram_iso_cap == 50

    def test_cached(self):
        assert get_settings() is get_settings()

    def test_unknown_variables_ignored(self, settings_env):
        settings = settings_env(no_such_option="1")
        assert not hasattr(settings, "no_such_option")
