"""
Settings System Integration Tests
ConfigManager files, dot-notation access, environment overrides and presets
"""

import json
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from core.category_presets import load_presets
from utils.config_manager import DEFAULT_SETTINGS, ConfigManager

CONFIG_DIR = Path(__file__).parent.parent / 'config'


@pytest.fixture
def clean_env(monkeypatch):
    for var in ("DOS_IMPACT_LOG_LEVEL", "DOS_IMPACT_WORKERS", "DOS_IMPACT_CHUNK_SIZE", "DOS_IMPACT_SEED"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setattr("utils.config_manager.load_dotenv", lambda *args, **kwargs: False)
    return monkeypatch


class TestConfigManagerInitialization:
    def test_missing_files_fall_back_to_defaults(self, tmp_path, clean_env, caplog):
        config = ConfigManager(settings_path=str(tmp_path / 'settings.json'),
                               presets_path=str(tmp_path / 'presets.json'))
        assert config.settings == DEFAULT_SETTINGS
        assert config.settings is not DEFAULT_SETTINGS
        assert config.get_all_presets() == []
        assert "Settings file not found" in caplog.text

    def test_partial_file_merged_over_defaults(self, tmp_path, clean_env):
        settings = tmp_path / 'settings.json'
        settings.write_text(json.dumps({"simulation": {"n_paths": 50}}), encoding='utf-8')
        config = ConfigManager(settings_path=str(settings), presets_path=str(tmp_path / 'presets.json'))
        assert config.get('simulation.n_paths') == 50
        assert config.get('simulation.dt') == 1.0
        assert config.get('execution.chunk_size') == 250

    def test_malformed_file_uses_defaults(self, tmp_path, clean_env, caplog):
        settings = tmp_path / 'settings.json'
        settings.write_text("{not json", encoding='utf-8')
        config = ConfigManager(settings_path=str(settings), presets_path=str(tmp_path / 'presets.json'))
        assert config.get('simulation.seed') == 42
        assert "Error loading settings" in caplog.text

    def test_shipped_configuration(self, clean_env):
        config = ConfigManager(settings_path=str(CONFIG_DIR / 'settings.json'),
                               presets_path=str(CONFIG_DIR / 'category_presets.json'))
        assert config.get('simulation.horizon') == 2160.0
        assert [p['id'] for p in config.get_all_presets()] == [
            "public_service", "company", "shared_infrastructure", "technology_provider"
        ]


class TestSettingsGetSet:
    def test_dot_notation(self, tmp_path, clean_env):
        config = ConfigManager(settings_path=str(tmp_path / 's.json'), presets_path=str(tmp_path / 'p.json'))
        config.set('simulation.seed', 7)
        assert config.get('simulation.seed') == 7
        config.set('nested.path.value', 42)
        assert config.get('nested.path.value') == 42
        assert config.get('nonexistent.key', 'default') == 'default'
        assert config.get('execution.max_workers', 3) == 3


class TestEnvironmentOverrides:
    def test_variables_override_settings(self, tmp_path, clean_env):
        clean_env.setenv("DOS_IMPACT_SEED", "123")
        clean_env.setenv("DOS_IMPACT_WORKERS", "6")
        clean_env.setenv("DOS_IMPACT_LOG_LEVEL", "DEBUG")
        config = ConfigManager(settings_path=str(tmp_path / 's.json'), presets_path=str(tmp_path / 'p.json'))
        assert config.get('simulation.seed') == 123
        assert config.get('execution.max_workers') == 6
        assert config.get('logging.level') == "DEBUG"

    def test_bad_value_ignored(self, tmp_path, clean_env, caplog):
        clean_env.setenv("DOS_IMPACT_CHUNK_SIZE", "lots")
        config = ConfigManager(settings_path=str(tmp_path / 's.json'), presets_path=str(tmp_path / 'p.json'))
        assert config.get('execution.chunk_size') == 250
        assert "Ignoring DOS_IMPACT_CHUNK_SIZE" in caplog.text

    def test_environment_can_be_disabled(self, tmp_path, clean_env):
        clean_env.setenv("DOS_IMPACT_SEED", "123")
        config = ConfigManager(settings_path=str(tmp_path / 's.json'), presets_path=str(tmp_path / 'p.json'),
                               use_environment=False)
        assert config.get('simulation.seed') == 42


class TestPresets:
    def test_shipped_presets(self, clean_env):
        config = ConfigManager(settings_path=str(CONFIG_DIR / 'settings.json'),
                               presets_path=str(CONFIG_DIR / 'category_presets.json'))
        by_id = {p['id']: p for p in config.get_all_presets()}
        assert by_id['public_service']['r_eq_annual'] == 0.9
        assert by_id['public_service']['high_priority_continuity'] is True

    def test_presets_feed_category_table(self, clean_env):
        config = ConfigManager(settings_path=str(CONFIG_DIR / 'settings.json'),
                               presets_path=str(CONFIG_DIR / 'category_presets.json'))
        presets = load_presets(config.get_all_presets())
        assert set(presets) == {"public_service", "company", "shared_infrastructure", "technology_provider"}
        assert presets["shared_infrastructure"].requires_explicit_r_eq
        assert presets["company"].resolve_r_eq_annual(operational_margin=0.5) == 0.5
