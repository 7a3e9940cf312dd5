"""Absolute SPDC pair rates into single Gaussian modes."""

from pathlib import Path

from ._core import (
    RateReport,
    SourceConfig,
    SpdcError,
    compare_experiment,
    confinement_correction,
    erf,
    gamma_rate_factor,
    gamma_sweep,
    integrate,
    normalization_alpha,
    optimal_gamma,
    phi_z,
    phi_z_thick,
    phi_z_thin,
    sinc,
    spectral_integral,
    spectral_rate_density,
    thin_crystal_total,
    total_rate,
    waist_scaling,
    walk_off,
    xi_sweep_csv,
)
from ._core import load_config as _load_config

_HERE = Path(__file__).resolve().parent


def _packaged(name):
    p = _HERE / "data" / name
    return str(p) if p.exists() else None


def load_config(path, overrides=(), angle_convention=None, material_db=None):
    """Load a source configuration; units in field names, SI afterwards."""
    if material_db is None:
        material_db = _packaged("materials.json")
    return _load_config(str(path), list(overrides), angle_convention, material_db)


def default_config_path():
    """Path of the shipped BBO example when installed as a wheel."""
    return _packaged("bbo_type2_noncollinear.json")


__all__ = [
    "RateReport",
    "SourceConfig",
    "SpdcError",
    "compare_experiment",
    "confinement_correction",
    "default_config_path",
    "erf",
    "gamma_rate_factor",
    "gamma_sweep",
    "integrate",
    "load_config",
    "normalization_alpha",
    "optimal_gamma",
    "phi_z",
    "phi_z_thick",
    "phi_z_thin",
    "sinc",
    "spectral_integral",
    "spectral_rate_density",
    "thin_crystal_total",
    "total_rate",
    "waist_scaling",
    "walk_off",
    "xi_sweep_csv",
]
