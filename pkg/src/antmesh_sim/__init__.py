"""Deterministic discrete-event simulator for multi-radio wireless mesh
networks routed by pheromone-laying smart ants, with static min-hop and
hop-count-ant baselines, scenario presets, and a metrics pipeline."""

from .kernels import COMPILED
from .runner import run_experiment, run_one
from .scenario import ConfigError, expand_preset, parse_scenario
from .simulation import Simulation

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "ConfigError",
    "Simulation",
    "__version__",
    "expand_preset",
    "parse_scenario",
    "run_experiment",
    "run_one",
]
