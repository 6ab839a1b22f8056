"""
Configuration loader utility
"""

import copy
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_CHECKS = [
    'solver_convergence',
    'vanishing',
    'unit_boundary_modulus',
    'extremal_gamma',
    'capacity_quarter_length',
    'strip_bound',
    'riemann_equivalence',
    'valence',
    'norm_preservation',
    'composition_norm',
    'nonseparability',
    'almost_surjectivity',
    'koebe_expansion',
    'schwarz',
    'uniqueness',
]


class ConfigLoader:
    """Load and manage configuration."""

    @staticmethod
    def load(config_path: Optional[str]) -> Dict[str, Any]:
        """
        Load configuration from YAML file, merged onto the defaults.

        Args:
            config_path: Path to configuration file

        Returns:
            Configuration dictionary
        """
        defaults = ConfigLoader._get_default_config()
        if not config_path:
            return defaults

        config_file = Path(config_path)
        if not config_file.exists():
            logger.warning(f"Config file not found: {config_path}; using defaults")
            return defaults

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.error(f"Error loading configuration: {e}")
            return defaults

        if not isinstance(config, dict):
            logger.error(f"Configuration root in {config_path} is not a mapping; using defaults")
            return defaults

        config = ConfigLoader._expand_env_vars(config)
        logger.info(f"Configuration loaded from {config_path}")
        return ConfigLoader.merge(defaults, config)

    @staticmethod
    def merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Recursive dict merge; override wins on leaves."""
        merged = copy.deepcopy(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = ConfigLoader.merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    @staticmethod
    def _expand_env_vars(config: Any) -> Any:
        """
        Recursively expand environment variables in config.
        Supports ${VAR_NAME} syntax.
        """
        if isinstance(config, dict):
            return {k: ConfigLoader._expand_env_vars(v) for k, v in config.items()}
        elif isinstance(config, list):
            return [ConfigLoader._expand_env_vars(item) for item in config]
        elif isinstance(config, str):
            pattern = r'\$\{([^}]+)\}'
            for var_name in re.findall(pattern, config):
                env_value = os.environ.get(var_name, '')
                if env_value:
                    config = config.replace(f'${{{var_name}}}', env_value)
                else:
                    logger.warning(f"Environment variable {var_name} not found")
            return ConfigLoader._coerce(config)
        return config

    @staticmethod
    def _coerce(value: str) -> Any:
        """Expanded strings that spell a number become numbers."""
        try:
            return int(value)
        except ValueError:
            pass
        try:
            return float(value)
        except ValueError:
            return value

    @staticmethod
    def _get_default_config() -> Dict[str, Any]:
        """Get default configuration."""
        return {
            'solver': {
                'boundary_samples_per_component': 512,
                'angle_cuts': 16,
                'max_outer_iterations': 60,
                'constraint_tolerance': 1e-6,
                'stall_tolerance': 1e-10,
                'check_refinement': 4,
                'max_cuts_per_iteration': 4096,
                'refinement_rounds': 8,
                'lp_method': 'highs-ds',
                'adaptive': True,
                'modulus_band': 1e-3,
                'vanishing_tolerance': 5e-5,
                'enrichment_rounds': 3,
                'pole_order': 2,
                'pole_ratio': 0.4,
                'degree_step': 4,
                'max_polynomial_degree': 32,
            },
            'basis': {
                'polynomial_degree': 12,
                'hole_depth': None,
            },
            'quadrature': {
                'nodes_per_interval': 32,
                'tolerance': 1e-12,
                'floor_factor': 1e-9,
            },
            'harness': {
                'enabled_checks': list(DEFAULT_CHECKS),
                'threads': 4,
                'mesh_levels': 14,
                'mesh_points': 1024,
                'valence_samples': 2048,
                'valence_values': [[0.0, 0.0], [0.3, 0.2], [-0.5, 0.1]],
                'separation_count': 8,
                'surjectivity_angles': 4,
                'surjectivity_r0': 0.8,
                'koebe_omitted': [0.75, 0.0],
                'strip_samples': 10000,
                'seed': 20240601,
            },
            'output': {
                'directory': 'out',
            },
            'logging': {
                'level': 'INFO',
                'file': None,
            },
        }
