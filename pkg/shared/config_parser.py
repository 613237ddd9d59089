#!/usr/bin/env python3

import logging
from pathlib import Path
from typing import Any

import yaml

from shared.errors import ConfigurationError


def parse_config_document(config_file: str | Path) -> dict[str, Any]:
    """
    Parse a JSON or YAML document holding run parameters.

    JSON is a subset of YAML, so a single ``yaml.safe_load`` covers both.
    Keys may use either dashes or underscores (``qmax``, ``sqrt-ab-min``);
    they are normalized to underscores.

    Args:
        config_file: Path to the document.

    Returns:
        Flat mapping of parameter name to value.

    Raises:
        ConfigurationError: If the file is missing, unparseable, or not a mapping.
    """
    try:
        with open(config_file, "r") as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"Configuration file not found: {config_file}")
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Failed to parse config document: {e}")

    if document is None:
        logging.warning(f"action: parse_config | file: {config_file} | result: empty")
        return {}

    if not isinstance(document, dict):
        raise ConfigurationError(f"Config document must be a mapping, got {type(document).__name__}")

    parsed = {}
    for key, value in document.items():
        if value is None:
            logging.debug(f"Skipping unset config key: {key}")
            continue
        parsed[str(key).replace("-", "_")] = value

    logging.debug(f"action: parse_config | file: {config_file} | keys: {sorted(parsed)}")
    return parsed
