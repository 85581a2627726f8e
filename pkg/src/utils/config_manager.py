"""Configuration management"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List

from dotenv import load_dotenv

# environment variable -> (settings key, type)
ENV_OVERRIDES = {
    "DOS_IMPACT_LOG_LEVEL": ("logging.level", str),
    "DOS_IMPACT_WORKERS": ("execution.max_workers", int),
    "DOS_IMPACT_CHUNK_SIZE": ("execution.chunk_size", int),
    "DOS_IMPACT_SEED": ("simulation.seed", int),
}

DEFAULT_SETTINGS: Dict[str, Any] = {
    "version": "1.0.0",
    "app_name": "DoS Impact Simulator",
    "simulation": {
        "dt": 1.0,
        "horizon": 2160.0,
        "n_paths": 1000,
        "seed": 42,
        "usability_mode": "linearized",
        "noise_enabled": True,
        "record_every": 1
    },
    "execution": {
        "max_workers": None,
        "chunk_size": 250
    },
    "logging": {
        "level": "INFO",
        "log_dir": None
    }
}

# category presets fall back to the built-in table in core.category_presets
DEFAULT_PRESETS: Dict[str, Any] = {
    "version": "1.0.0",
    "presets": []
}


class ConfigManager:
    """Manage application settings and category presets from JSON files"""

    def __init__(self, settings_path: str = "config/settings.json",
                 presets_path: str = "config/category_presets.json",
                 use_environment: bool = True):
        """
        Initialize configuration manager

        Args:
            settings_path: Path to settings JSON file
            presets_path: Path to category presets JSON file
            use_environment: Apply .env / environment overrides after loading
        """
        self.logger = logging.getLogger(__name__)
        self.settings_path = Path(settings_path)
        self.presets_path = Path(presets_path)

        self.settings: Dict[str, Any] = {}
        self.presets: Dict[str, Any] = {}

        self._load_config()
        if use_environment:
            self._apply_environment()

    def _load_config(self):
        """Load configuration from files"""
        # Load settings
        try:
            if self.settings_path.exists():
                with open(self.settings_path, 'r', encoding='utf-8') as f:
                    self.settings = self._merge(DEFAULT_SETTINGS, json.load(f))
                    self.logger.debug(f"Loaded settings from {self.settings_path}")
            else:
                self.logger.warning(f"Settings file not found: {self.settings_path}, using defaults")
                self.settings = copy.deepcopy(DEFAULT_SETTINGS)
        except Exception as e:
            self.logger.error(f"Error loading settings: {e}")
            self.settings = copy.deepcopy(DEFAULT_SETTINGS)

        # Load presets
        try:
            if self.presets_path.exists():
                with open(self.presets_path, 'r', encoding='utf-8') as f:
                    self.presets = json.load(f)
                    self.logger.debug(f"Loaded presets from {self.presets_path}")
            else:
                self.logger.warning(f"Presets file not found: {self.presets_path}, using built-in category presets")
                self.presets = copy.deepcopy(DEFAULT_PRESETS)
        except Exception as e:
            self.logger.error(f"Error loading presets: {e}")
            self.presets = copy.deepcopy(DEFAULT_PRESETS)

    @staticmethod
    def _merge(defaults: Dict[str, Any], loaded: Dict[str, Any]) -> Dict[str, Any]:
        """Overlay loaded values on a copy of the defaults, section by section"""
        merged = copy.deepcopy(defaults)
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = ConfigManager._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _apply_environment(self):
        """Apply .env file and DOS_IMPACT_* environment variables"""
        load_dotenv()
        for var, (key, cast) in ENV_OVERRIDES.items():
            raw = os.environ.get(var)
            if raw is None or raw == "":
                continue
            try:
                self.set(key, cast(raw))
                self.logger.debug(f"{var} overrides {key}")
            except ValueError:
                self.logger.warning(f"Ignoring {var}={raw!r}: expected {cast.__name__}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value

        Args:
            key: Configuration key (supports dot notation, e.g., 'simulation.dt')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        keys = key.split('.')
        value = self.settings

        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default

        return value if value is not None else default

    def set(self, key: str, value: Any):
        """
        Set configuration value

        Args:
            key: Configuration key (supports dot notation)
            value: Value to set
        """
        keys = key.split('.')
        config = self.settings

        # Navigate to the parent dict
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def get_all_presets(self) -> List[Dict[str, Any]]:
        """Get all available presets"""
        return self.presets.get('presets', [])
