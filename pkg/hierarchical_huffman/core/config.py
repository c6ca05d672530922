import copy
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class ConfigLoader:
    DEFAULT_CONFIG = {
        "miner": {
            "min_length": 3,
            "min_frequency": 10,
            "max_entries": 65790,
            "max_workers": 4,
        },
        "synth": {
            "seed": 1,
            "zipf_s": 1.0,
            "keyword_density": 0.3,
            "keywords_file": None,  # None = packaged computer-science list
        },
        "bench": {
            "max_workers": 4,
            "seed": 1,
            "sizes": [500000, 1000000, 2000000],
            "pattern_lengths": [3, 10, 20, 40],
            "pattern_frequencies": [10, 50, 200],
            "keywords_per_point": 50,
            "replicates": 1,
        },
        "logging": {
            "level": "INFO",
        },
    }

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config_path = Path(config_path) if config_path else None
        if self.config_path is not None:
            self.load()

    def load(self):
        """Loads config from file, overriding defaults.

        Unlike a service config, a missing file is an error: the path was
        given explicitly on the command line.
        """
        path = self.config_path
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}")

        if path.suffix in [".yaml", ".yml"]:
            loaded = self._load_from_yaml(path)
        elif path.suffix == ".json":
            loaded = self._load_from_json(path)
        else:
            raise ConfigurationError(f"Unsupported config format: {path.suffix}")

        if loaded:
            if not isinstance(loaded, dict):
                raise ConfigurationError(f"Config root must be a mapping: {path}")
            self._merge(self.config, loaded)
        logger.debug(f"Loaded configuration from {path}")

    def _load_from_yaml(self, path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                return yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Error loading YAML config: {e}") from e

    def _load_from_json(self, path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Error loading JSON config: {e}") from e

    def _merge(self, base, update):
        """Recursively merge update dict into base dict."""
        for k, v in update.items():
            if k in base and isinstance(base[k], dict) and isinstance(v, dict):
                self._merge(base[k], v)
            else:
                base[k] = v

    def save(self, path: Union[str, Path]):
        """Saves current config to file."""
        path = Path(path)
        with open(path, "w", encoding="utf-8") as f:
            if path.suffix in [".yaml", ".yml"]:
                yaml.dump(self.config, f, default_flow_style=False)
            else:
                json.dump(self.config, f, indent=4)

    def get(self, section: str, key: Optional[str] = None) -> Any:
        """Safe getter."""
        if section not in self.config:
            return None
        if key is None:
            return self.config[section]
        return self.config[section].get(key)
