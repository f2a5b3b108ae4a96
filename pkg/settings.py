"""
PCD Settings
============

Base paths, YAML configuration loading and logging setup.
"""
import logging
from pathlib import Path

import yaml

from errors import ConfigError

# Define the base directory for the project
PCD_BASE_DIR = Path(__file__).parent.absolute()

# Define paths for different components
CONFIG_DIR = PCD_BASE_DIR / "config"
DEFAULT_CONFIG = CONFIG_DIR / "pcd_config.yaml"
BENCHMARKS_CONFIG = CONFIG_DIR / "benchmarks.yaml"
VARIANTS_CONFIG = CONFIG_DIR / "variants.yaml"

__version__ = "0.1.0"


def load_yaml(path):
    """Read a YAML mapping, raising ConfigError when it is missing or malformed."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            content = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found at {path}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"could not parse {path}: {e}") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"{path} must contain a mapping at the top level")
    return content


def load_settings(path=None):
    """Load pcd_config.yaml, or a user file layered over it."""
    settings = load_yaml(DEFAULT_CONFIG)
    if path is not None and Path(path) != DEFAULT_CONFIG:
        for section, values in load_yaml(path).items():
            if isinstance(values, dict) and isinstance(settings.get(section), dict):
                settings[section] = {**settings[section], **values}
            else:
                settings[section] = values
    return settings


def load_benchmarks():
    return load_yaml(BENCHMARKS_CONFIG)


def load_variants():
    return load_yaml(VARIANTS_CONFIG)


def configure_logging(settings, level=None):
    """Configure the root logger from the `logging` section."""
    log_settings = settings.get("logging", {})
    level_name = (level or log_settings.get("level", "INFO")).upper()
    handlers = [logging.StreamHandler()]
    if log_settings.get("file"):
        log_file = Path(log_settings["file"])
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format=log_settings.get(
            "format", "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        ),
        handlers=handlers,
        force=True,
    )
