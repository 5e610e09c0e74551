"""Radial wave equations outside the unit ball in R^3."""

from ._core import (
    Grid,
    ConfigError,
    SolverError,
    TruncationError,
    dipole_block,
    dispersive_probe,
    energy,
    forward,
    gaussian_bump,
    half_wave,
    inverse,
    kernel,
    lp_project,
    lq_norm,
    rough_profile,
    run_experiment,
    run_ftm,
    sobolev_norm,
    solve,
    subcommands,
    wave_propagate,
    wholespace_kernel,
)

__all__ = [
    "Grid",
    "ConfigError",
    "SolverError",
    "TruncationError",
    "dipole_block",
    "dispersive_probe",
    "energy",
    "forward",
    "gaussian_bump",
    "half_wave",
    "inverse",
    "kernel",
    "lp_project",
    "lq_norm",
    "rough_profile",
    "run_experiment",
    "run_ftm",
    "sobolev_norm",
    "solve",
    "subcommands",
    "wave_propagate",
    "wholespace_kernel",
]
