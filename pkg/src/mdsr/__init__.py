"""Multi-dark-state resonance spectra of cold 87Rb on the D1 line."""

from .levels import SchemeId, build_scheme, dipole_table
from .liouville import FieldConfig, ModelParams, PopulationModel, SolverError
from .spectra import find_windows, sweep_spectrum, symmetric_grid

__version__ = "0.1.0"

__all__ = [
    "SchemeId",
    "build_scheme",
    "dipole_table",
    "FieldConfig",
    "ModelParams",
    "PopulationModel",
    "SolverError",
    "find_windows",
    "sweep_spectrum",
    "symmetric_grid",
]
