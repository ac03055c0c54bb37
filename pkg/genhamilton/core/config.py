"""Configuration management using pydantic-settings."""

from pathlib import Path
from typing import Any

import yaml
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from genhamilton.core.utils.logger import logger

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class AnalysisConfig(BaseSettings):
    """Limits and output options for the analysis pipelines.

    Supports environment variables with prefix GENHAM_
    (e.g. GENHAM_GROUP_ORDER_CAP=200000).
    """

    model_config = SettingsConfigDict(
        env_prefix="GENHAM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Largest group order enumerated element by element
    group_order_cap: int = 100_000

    # Largest abelian quotient G/G' whose subgroups are enumerated
    quotient_cap: int = 4096

    # Largest group order for the explicit generating graph
    oracle_cap: int = 360

    # Backtracks allowed in the Hamiltonian cycle search
    search_budget: int = 100_000_000

    # Logging configuration
    log_level: str = "INFO"

    # Output
    quiet_posa0: bool = False
    json_output: bool = False

    # Files processed concurrently in batch mode
    jobs: int = 1

    # Optional YAML configuration file
    config_file: Path | None = None

    @field_validator("group_order_cap", "quotient_cap", "oracle_cap", "search_budget", "jobs")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Caps, budgets and job counts must be positive."""
        if v < 1:
            raise ValueError(f"Value must be positive, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize and check the log level name."""
        level = v.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"Unknown log level: {v}. Expected one of {', '.join(_LOG_LEVELS)}")
        return level

    @field_validator("config_file")
    @classmethod
    def validate_config_file(cls, v: Path | None) -> Path | None:
        """Validate configuration file path."""
        if v is None:
            return None
        path = v.expanduser().resolve()
        if not path.exists():
            raise ValueError(f"Configuration file does not exist: {path}")
        return path


def _discover_config_file() -> Path | None:
    """Auto-discover a YAML config file in the current working directory."""
    cwd = Path.cwd()
    for name in (".genhamilton.yaml", ".genhamilton.yml", "genhamilton.yaml", "genhamilton.yml"):
        path = cwd / name
        if path.is_file():
            return path
    return None


def _apply_yaml_config(config: AnalysisConfig, yaml_data: dict[str, Any]) -> None:
    """Apply the ``analysis`` section of a YAML file to an existing config.

    Only applies values that were not already set via environment variables.
    Mutates the config in place.

    Args:
        config: AnalysisConfig instance to update
        yaml_data: Parsed YAML dictionary
    """
    section = yaml_data.get("analysis")
    if not section or not isinstance(section, dict):
        return

    explicitly_set = config.model_fields_set
    field_map = {
        "cap": "group_order_cap",
        "group_order_cap": "group_order_cap",
        "quotient_cap": "quotient_cap",
        "oracle_cap": "oracle_cap",
        "budget": "search_budget",
        "search_budget": "search_budget",
        "log_level": "log_level",
        "quiet_posa0": "quiet_posa0",
        "json": "json_output",
        "jobs": "jobs",
    }
    for yaml_key, config_attr in field_map.items():
        if yaml_key in section and config_attr not in explicitly_set:
            validated = AnalysisConfig.model_validate({config_attr: section[yaml_key]})
            setattr(config, config_attr, getattr(validated, config_attr))


def load_config(**overrides: Any) -> AnalysisConfig:
    """Load configuration from overrides, environment, YAML file, and defaults.

    Priority: overrides (CLI flags) > environment variables > YAML config > defaults

    Args:
        **overrides: Field values that win over every other source; ``None``
            values are ignored

    Returns:
        The merged configuration
    """
    explicit = {key: value for key, value in overrides.items() if value is not None}
    config = AnalysisConfig(**explicit)

    config_path = config.config_file or _discover_config_file()

    if config_path and config_path.is_file():
        try:
            with open(config_path) as f:
                yaml_data = yaml.safe_load(f)
            if yaml_data and isinstance(yaml_data, dict):
                _apply_yaml_config(config, yaml_data)
        except Exception as e:
            logger.warning(f"Ignoring unreadable config file {config_path}: {e}")

    return config
