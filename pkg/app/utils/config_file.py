import configparser
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from app.core.exceptions import ConfigError
from app.models.scan_model import ScanConfig
from app.utils.logger import logger

RUN_SECTION = "run"


def read_config_file(path: str) -> Dict[str, str]:
    """
    Read the [run] section of a key = value configuration file.

    Args:
        path: Path of the file

    Returns:
        Dict[str, str]: Raw values keyed by field name
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")

    unknown_sections = [name for name in parser.sections() if name != RUN_SECTION]
    if unknown_sections:
        raise ConfigError(f"Unknown config sections: {', '.join(unknown_sections)}")
    if not parser.has_section(RUN_SECTION):
        return {}
    return dict(parser.items(RUN_SECTION))


def resolve_config(file_values: Optional[Mapping[str, Any]] = None,
                   overrides: Optional[Mapping[str, Any]] = None) -> ScanConfig:
    """
    Merge file values with command-line overrides into a validated ScanConfig.

    Unknown keys and invalid values raise ConfigError.
    """
    merged: Dict[str, Any] = dict(file_values or {})
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})

    unknown = sorted(set(merged) - set(ScanConfig.model_fields))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
    try:
        config = ScanConfig(**merged)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}")
    logger.debug(f"Resolved configuration: {config.model_dump(mode='json')}")
    return config
