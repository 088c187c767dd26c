"""Python access to the helmkit core."""

from ._core import (
    Config,
    ConfigError,
    NumericalError,
    default_nmax,
    dtn_coefficients,
    longest_ray_length,
    mesh_threshold,
    quasimode_lower_bound,
    quasioptimality_study,
    sound_soft_disk,
    volterra_discrete,
)

__all__ = [
    "Config",
    "ConfigError",
    "NumericalError",
    "default_nmax",
    "dtn_coefficients",
    "longest_ray_length",
    "mesh_threshold",
    "quasimode_lower_bound",
    "quasioptimality_study",
    "sound_soft_disk",
    "volterra_discrete",
]
