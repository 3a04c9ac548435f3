#!/usr/bin/env python3
"""
Configuration Loader for binomdec
"""

import copy
import logging
import os
from typing import Any, Dict

import yaml

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'engine': {'order': 'degrevlex', 'check_invariants': False},
    'decomposition': {
        'prune': True,
        'allow_extension': False,
        'cross_check_v1': False,
        'max_quasipower_exponent': 4,
    },
    'logging': {'level': 'INFO', 'format': 'text', 'file': ''},
    'output': {'format': 'json', 'destination': 'stdout', 'directory': 'outputs'},
    'monitoring': {'enabled': True, 'textfile': ''},
}

LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
TRUE_STRINGS = ('1', 'true', 'yes', 'on')
FALSE_STRINGS = ('0', 'false', 'no', 'off')


def _env_bool(name: str, current: Any) -> Any:
    value = os.getenv(name)
    if value is None:
        return current
    lowered = value.strip().lower()
    if lowered in TRUE_STRINGS:
        return True
    if lowered in FALSE_STRINGS:
        return False
    # left as a string so validate_config reports it
    return value


def load_config(config_path: str = None) -> Dict[str, Any]:
    """
    Load configuration from YAML file and environment variables

    Args:
        config_path: Path to the configuration file. If None, uses config/config.yaml
            next to the package, falling back to built-in defaults when it is absent.

    Returns:
        Dictionary containing the configuration
    """
    loaded: Dict[str, Any] = {}
    if config_path is None:
        script_dir = os.path.dirname(os.path.abspath(__file__))
        default_path = os.path.join(script_dir, '..', 'config', 'config.yaml')
        if os.path.exists(default_path):
            config_path = default_path
    if config_path is not None:
        with open(config_path, 'r') as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"Configuration file {config_path} must contain a mapping")

    config = copy.deepcopy(DEFAULTS)
    for section, values in loaded.items():
        if isinstance(values, dict) and section in config:
            config[section].update(values)
        else:
            config[section] = values

    config['logging']['level'] = os.getenv('BINOMDEC_LOG_LEVEL', config['logging']['level'])
    config['logging']['format'] = os.getenv('BINOMDEC_LOG_FORMAT', config['logging']['format'])
    config['output']['format'] = os.getenv('BINOMDEC_OUTPUT_FORMAT', config['output']['format'])
    config['output']['destination'] = os.getenv('BINOMDEC_OUTPUT_DESTINATION', config['output']['destination'])
    config['output']['directory'] = os.getenv('BINOMDEC_OUTPUT_DIRECTORY', config['output']['directory'])
    config['monitoring']['textfile'] = os.getenv('BINOMDEC_METRICS_FILE', config['monitoring']['textfile'])
    config['decomposition']['allow_extension'] = _env_bool(
        'BINOMDEC_ALLOW_EXTENSION', config['decomposition']['allow_extension'])
    config['decomposition']['prune'] = _env_bool('BINOMDEC_PRUNE', config['decomposition']['prune'])
    config['engine']['check_invariants'] = _env_bool(
        'BINOMDEC_CHECK_INVARIANTS', config['engine']['check_invariants'])

    validate_config(config)

    return config


def validate_config(config: Dict[str, Any]) -> None:
    """
    Validate the loaded configuration

    Args:
        config: Configuration dictionary to validate

    Raises:
        ValueError: If configuration is invalid
    """
    errors = []

    engine = config.get('engine', {})
    if engine.get('order', 'degrevlex') != 'degrevlex':
        errors.append(f"Term order '{engine.get('order')}' is not valid. Must be: degrevlex")

    booleans = [
        ('engine', 'check_invariants'),
        ('decomposition', 'prune'),
        ('decomposition', 'allow_extension'),
        ('decomposition', 'cross_check_v1'),
        ('monitoring', 'enabled'),
    ]
    for section, key in booleans:
        value = config.get(section, {}).get(key, False)
        if not isinstance(value, bool):
            errors.append(f"{section}.{key} must be a boolean, got {value!r}")

    exponent = config.get('decomposition', {}).get('max_quasipower_exponent', 1)
    if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 1:
        errors.append(f"decomposition.max_quasipower_exponent must be a positive integer, got {exponent!r}")

    logging_config = config.get('logging', {})
    log_level = logging_config.get('level', 'INFO')
    if log_level not in LOG_LEVELS:
        errors.append(f"Log level '{log_level}' is not valid. Must be one of: {', '.join(LOG_LEVELS)}")
    log_format = logging_config.get('format', 'text')
    if log_format not in ['text', 'json']:
        errors.append(f"Log format '{log_format}' is not valid. Must be one of: text, json")

    output_config = config.get('output', {})
    output_format = output_config.get('format', 'json')
    if output_format not in ['json', 'pretty']:
        errors.append(f"Output format '{output_format}' is not valid. Must be one of: json, pretty")
    destination = output_config.get('destination', 'stdout')
    if destination not in ['stdout', 'file']:
        errors.append(f"Output destination '{destination}' is not valid. Must be one of: stdout, file")
    directory = output_config.get('directory', 'outputs')
    if destination == 'file' and (not isinstance(directory, str) or not directory.strip()):
        errors.append("Output directory must be a non-empty string when writing to files")

    if errors:
        error_msg = "Configuration validation failed with the following errors:\n" + "\n".join(
            [f"  - {error}" for error in errors])
        logger.error(error_msg)
        raise ValueError(error_msg)
