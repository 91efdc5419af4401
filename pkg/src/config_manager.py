import json
import os
from dataclasses import dataclass
from typing import Dict, Any, List, Optional
from pathlib import Path
from dotenv import load_dotenv
from sympy import isprime
import logging

KNOWN_SUITES = ('preimages', 'factorization', 'orbits', 'index', 'branching', 'classical',
                'dictionary', 'slopes', 'families', 'characters', 'cartesian', 'all')


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    p: int
    n: int
    d: int
    N: int
    r: int
    t: int
    m: int
    k: int
    seed: int
    budget: int
    samples: int
    suites: tuple

    def to_params(self) -> Dict[str, Any]:
        return {'p': self.p, 'n': self.n, 'd': self.d, 'N': self.N, 'r': self.r,
                't': self.t, 'm': self.m, 'k': self.k, 'samples': self.samples}


class ConfigManager:
    def __init__(self, config_file: Optional[str] = None, env_file: str = ".env"):
        self.config_file = Path(config_file) if config_file else None
        self.env_file = Path(env_file)
        self.logger = logging.getLogger(__name__)

        # Load environment variables
        if self.env_file.exists():
            load_dotenv(self.env_file)

        # Load configuration
        self.config = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        # Default configuration
        default_config = {
            "p": 3,
            "n": 2,
            "d": 1,
            "N": 6,
            "r": 1,
            "t": 3,
            "m": 1,
            "k": 0,
            "seed": 20240601,
            "budget": 200000,
            "samples": 200,
            "suites": ["all"],
            "reports": {
                "directory": "./reports",
                "formats": ["json"]
            },
            "logging": {
                "level": "WARNING"
            }
        }

        config = default_config
        # Load from JSON file if given
        if self.config_file is not None:
            if not self.config_file.exists():
                raise ConfigError(f"config file {self.config_file} does not exist")
            try:
                with open(self.config_file, 'r') as f:
                    file_config = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"config file {self.config_file} is not valid JSON: {e}")
            # Merge with defaults
            config = self.merge_configs(default_config, file_config)

        # Override with environment variables
        config = self.apply_env_overrides(config)

        # Validate configuration
        self.validate_config(config)

        return config

    def merge_configs(self, default: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        result = default.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self.merge_configs(result[key], value)
            else:
                result[key] = value

        return result

    def apply_env_overrides(self, config: Dict[str, Any]) -> Dict[str, Any]:
        # Environment variable mappings
        env_mappings = {
            'COLEMAN_P': lambda c: self.set_nested_value(c, 'p', int(os.getenv('COLEMAN_P'))),
            'COLEMAN_N': lambda c: self.set_nested_value(c, 'n', int(os.getenv('COLEMAN_N'))),
            'COLEMAN_D': lambda c: self.set_nested_value(c, 'd', int(os.getenv('COLEMAN_D'))),
            'COLEMAN_PRECISION': lambda c: self.set_nested_value(c, 'N', int(os.getenv('COLEMAN_PRECISION'))),
            'COLEMAN_SEED': lambda c: self.set_nested_value(c, 'seed', int(os.getenv('COLEMAN_SEED'))),
            'COLEMAN_BUDGET': lambda c: self.set_nested_value(c, 'budget', int(os.getenv('COLEMAN_BUDGET'))),
            'COLEMAN_REPORTS_DIR': lambda c: self.set_nested_value(c, 'reports.directory', os.getenv('COLEMAN_REPORTS_DIR')),
            'COLEMAN_LOG_LEVEL': lambda c: self.set_nested_value(c, 'logging.level', os.getenv('COLEMAN_LOG_LEVEL').upper()),
        }

        for env_var, setter in env_mappings.items():
            if env_var in os.environ:
                try:
                    config = setter(config)
                except Exception as e:
                    self.logger.warning(f"Failed to apply environment override for {env_var}: {e}")

        return config

    def set_nested_value(self, config: Dict[str, Any], path: str, value: Any) -> Dict[str, Any]:
        keys = path.split('.')
        current = config

        # Navigate to the parent of the target key
        for key in keys[:-1]:
            if key not in current:
                current[key] = {}
            current = current[key]

        # Set the value
        current[keys[-1]] = value
        return config

    def validate_config(self, config: Dict[str, Any]):
        for key in ('p', 'n', 'd', 'N', 'r', 't', 'm', 'k', 'seed', 'budget', 'samples'):
            if not isinstance(config.get(key), int) or isinstance(config.get(key), bool):
                raise ConfigError(f"{key} must be an integer, got {config.get(key)!r}")

        if not isprime(config['p']):
            raise ConfigError(f"p must be prime, got {config['p']}")

        if config['n'] < 1 or config['d'] < 1:
            raise ConfigError("n and d must be at least 1")

        if config['N'] < 2:
            raise ConfigError("working precision N must be at least 2")

        if not 1 <= config['r'] < config['N']:
            raise ConfigError(f"r must satisfy 1 <= r < N, got r={config['r']}")

        # Radii of the tubes and the diamond level
        m, k, t = config['m'], config['k'], config['t']
        if not (0 <= k <= m < t < config['N']):
            raise ConfigError(f"radii must satisfy 0 <= k <= m < t < N, got m={m}, k={k}, t={t}")
        if k != 0 and m == k:
            raise ConfigError("radii with k > 0 need m > k")

        if config['budget'] <= 0 or config['samples'] <= 0:
            raise ConfigError("budget and samples must be positive")

        unknown = [s for s in config.get('suites', []) if s not in KNOWN_SUITES]
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(unknown)}")

    def suite_config(self) -> SuiteConfig:
        c = self.config
        return SuiteConfig(c['p'], c['n'], c['d'], c['N'], c['r'], c['t'], c['m'], c['k'],
                           c['seed'], c['budget'], c['samples'], tuple(c['suites']))

    def get_reports_directory(self) -> str:
        return self.config['reports']['directory']

    def get_report_formats(self) -> List[str]:
        return self.config['reports']['formats']

    def get_logging_config(self) -> Dict[str, Any]:
        return self.config['logging']

    def get_seed(self) -> int:
        return self.config['seed']

    def get_budget(self) -> int:
        return self.config['budget']

    def save_config(self, config_path: str = None):
        path = Path(config_path) if config_path else self.config_file
        if path is None:
            raise ConfigError("no path given to save the configuration")

        try:
            with open(path, 'w') as f:
                json.dump(self.config, f, indent=2)
            self.logger.info(f"Configuration saved to {path}")
        except OSError as e:
            self.logger.error(f"Failed to save configuration: {e}")

    def update_config(self, updates: Dict[str, Any]):
        merged = self.merge_configs(self.config, updates)
        self.validate_config(merged)
        self.config = merged
        self.logger.info("Configuration updated")

    def get_full_config(self) -> Dict[str, Any]:
        return self.config.copy()
