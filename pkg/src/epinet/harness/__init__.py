"""Experiment orchestration: config files, ensembles, figure bundles."""

from .config import ConfigError, ExperimentConfig, load_config, validate_config
from .run import ComparisonReport, ExperimentResult, run_experiment
from .figures import FIGURE_NAMES, reproduce_figure

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "validate_config",
    "ComparisonReport",
    "ExperimentResult",
    "run_experiment",
    "FIGURE_NAMES",
    "reproduce_figure",
]
