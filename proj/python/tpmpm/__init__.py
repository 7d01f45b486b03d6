"""Python access to the two-phase material point solver."""

import json

from . import _tpmpm
from ._tpmpm import (
    ConfigError,
    DetectionError,
    Error,
    InvertedParticleError,
    IoError,
    ParticleEscapedError,
    SolverError,
    UnsupportedDomainError,
    gimp_1d,
    pressure_laplacian_coefficient,
    scenario_names,
    set_thread_count,
    terzaghi_average_consolidation,
    terzaghi_pressure,
    thread_count,
)

__all__ = [
    "ConfigError", "DetectionError", "Error", "InvertedParticleError",
    "IoError", "ParticleEscapedError", "Simulation", "SolverError",
    "UnsupportedDomainError", "gimp_1d", "load_scenario",
    "pressure_laplacian_coefficient", "run", "scenario_names",
    "set_thread_count", "terzaghi_average_consolidation", "terzaghi_pressure",
    "thread_count", "validate",
]


def _as_json(config):
    return config if isinstance(config, str) else json.dumps(config)


def load_scenario(name):
    """Built-in scenario as a plain dict, ready to edit."""
    return json.loads(_tpmpm.scenario_json(name))


def validate(config):
    """Parse and validate a config dict; returns the normalized dict."""
    return json.loads(_tpmpm.normalize_config(_as_json(config)))


class Simulation(_tpmpm.Simulation):
    """Stepwise access to a run; accepts a config dict or JSON text."""

    def __init__(self, config):
        super().__init__(_as_json(config))


def run(config, output_dir=""):
    """Run to end_time. Returns steps, probe records, snapshot files and the
    first contact time. An empty output_dir writes no files."""
    return _tpmpm.run(_as_json(config), output_dir)
