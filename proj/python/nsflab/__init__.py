"""Python access to the nsflab core."""

from ._core import (
    ConfigError,
    DomainError,
    FormatError,
    GateError,
    SolverError,
    ThermoModel,
    ballistic_energy,
    eval,
    gibbs_residual,
    gibbs_suite,
    parse_config,
    read_snapshot,
    rel_energy_density,
    simulate,
    theorem_gate,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FormatError",
    "GateError",
    "SolverError",
    "ThermoModel",
    "ballistic_energy",
    "eval",
    "gibbs_residual",
    "gibbs_suite",
    "parse_config",
    "read_snapshot",
    "rel_energy_density",
    "simulate",
    "theorem_gate",
]
