"""
Configuration management for painleve-lab.

Values come from built-in defaults, then an optional YAML mapping, then
environment variables (a .env file is honoured), which take precedence.
"""

import copy
import os
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")
REPORT_FORMATS = ("text", "structured")

DEFAULTS: Dict[str, Any] = {
    "ars": {"denominator_bound": 12, "probe_depth": 8, "series_order": 3},
    "lie": {"adjoint_bound": 10},
    "wtc": {"order": 6, "kruskal": False},
    "numeric": {"tolerance": 1e-10, "window": [0.5, 1.0]},
    "report": {"format": "text"},
    "log_level": "INFO",
}

# variable -> (section, key, parser)
ENVIRONMENT = {
    "PLAB_DENOMINATOR_BOUND": ("ars", "denominator_bound", int),
    "PLAB_PROBE_DEPTH": ("ars", "probe_depth", int),
    "PLAB_SERIES_ORDER": ("ars", "series_order", int),
    "PLAB_ADJOINT_BOUND": ("lie", "adjoint_bound", int),
    "PLAB_WTC_ORDER": ("wtc", "order", int),
    "PLAB_WTC_KRUSKAL": ("wtc", "kruskal", lambda v: v.strip().lower() in ("1", "true", "yes", "on")),
    "PLAB_TOLERANCE": ("numeric", "tolerance", float),
}


class ConfigError(Exception):
    """Raised when configuration is invalid."""

    pass


class Config:
    """
    Configuration manager for painleve-lab.
    """

    def __init__(self, config_data: Optional[Dict[str, Any]] = None):
        """
        Initialize configuration.

        Args:
            config_data: Mapping read from a YAML configuration file (optional)
        """
        load_dotenv()

        self.config_data: Dict[str, Any] = copy.deepcopy(DEFAULTS)
        if config_data is not None and not isinstance(config_data, dict):
            raise ConfigError(f"Configuration must be a mapping, got {type(config_data).__name__}")
        for section, values in (config_data or {}).items():
            if isinstance(self.config_data.get(section), dict):
                if not isinstance(values, dict):
                    raise ConfigError(f"Configuration section '{section}' must be a mapping, got {values!r}")
                self.config_data[section].update(values)
            else:
                self.config_data[section] = values

        self._load_from_env()
        self._validate()

    def _load_from_env(self):
        """Load configuration from environment variables."""
        for variable, (section, key, parser) in ENVIRONMENT.items():
            if variable not in os.environ:
                continue
            try:
                self.config_data[section][key] = parser(os.environ[variable])
            except ValueError:
                raise ConfigError(f"{variable} has an invalid value: {os.environ[variable]!r}")
        if "PLAB_LOG_LEVEL" in os.environ:
            self.config_data["log_level"] = os.environ["PLAB_LOG_LEVEL"]

    def _validate(self):
        """Validate configuration."""
        for section, key in (
            ("ars", "denominator_bound"),
            ("ars", "probe_depth"),
            ("ars", "series_order"),
            ("lie", "adjoint_bound"),
            ("wtc", "order"),
        ):
            value = self.config_data[section][key]
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{section}.{key} must be a positive integer, got {value!r}")

        tolerance = self.config_data["numeric"]["tolerance"]
        if not isinstance(tolerance, (int, float)) or tolerance <= 0:
            raise ConfigError(f"numeric.tolerance must be positive, got {tolerance!r}")

        window = self.config_data["numeric"]["window"]
        try:
            ordered = isinstance(window, (list, tuple)) and len(window) == 2 and float(window[0]) < float(window[1])
        except (TypeError, ValueError):
            ordered = False
        if not ordered:
            raise ConfigError(f"numeric.window must be [low, high] with low < high, got {window!r}")
        if float(window[0]) <= 0:
            raise ConfigError("numeric.window must stay to the right of the singularity at 0")

        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(f"report.format must be one of {REPORT_FORMATS}, got {self.report_format!r}")

        level = str(self.config_data["log_level"]).upper()
        if level not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {LOG_LEVELS}, got {self.config_data['log_level']!r}")
        self.config_data["log_level"] = level

    @property
    def denominator_bound(self) -> int:
        """Admissible denominators of leading exponents divide this."""
        return self.config_data["ars"]["denominator_bound"]

    @property
    def probe_depth(self) -> int:
        return self.config_data["ars"]["probe_depth"]

    @property
    def series_order(self) -> int:
        return self.config_data["ars"]["series_order"]

    @property
    def adjoint_bound(self) -> int:
        return self.config_data["lie"]["adjoint_bound"]

    @property
    def wtc_order(self) -> int:
        return self.config_data["wtc"]["order"]

    @property
    def wtc_kruskal(self) -> bool:
        return bool(self.config_data["wtc"]["kruskal"])

    @property
    def tolerance(self) -> float:
        return float(self.config_data["numeric"]["tolerance"])

    @property
    def window(self) -> List[float]:
        return [float(w) for w in self.config_data["numeric"]["window"]]

    @property
    def report_format(self) -> str:
        return self.config_data["report"]["format"]

    @property
    def log_level(self) -> str:
        return self.config_data["log_level"]
