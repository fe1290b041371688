"""Diósi-Penrose energies, reduction times and reduction probabilities of
superposed solids, with models of piezo and movable-plate capacitor
experiments that test deviations from Born's rule.
"""

from .config import load_config
from .dpenergy import MovablePlateCapacitorSpec, PiezoCapacitorSpec, PlateKind, PlateSpec, dp_energy_solid
from .dynamics import DisplacementProfile, ScenarioSet, competition_action
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    DPCollapseError,
    ModelWarning,
    NoReductionError,
)
from .experiments import ExperimentConfig, PhotodiodeParams, run_experiment
from .materials import Material, default_database
from .oracle import LatticeSpec, dp_energy_numeric_oracle
from .quantities import Quantity, parse_quantity
from .reduction import ReductionResult, find_reduction_time, reduce_scenario

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionError",
    "DisplacementProfile",
    "DomainError",
    "DPCollapseError",
    "ExperimentConfig",
    "LatticeSpec",
    "Material",
    "ModelWarning",
    "MovablePlateCapacitorSpec",
    "NoReductionError",
    "PhotodiodeParams",
    "PiezoCapacitorSpec",
    "PlateKind",
    "PlateSpec",
    "Quantity",
    "ReductionResult",
    "ScenarioSet",
    "competition_action",
    "default_database",
    "dp_energy_numeric_oracle",
    "dp_energy_solid",
    "find_reduction_time",
    "load_config",
    "parse_quantity",
    "reduce_scenario",
    "run_experiment",
]
