"""Free-boundary carbonation simulator."""

from ._core import (
    Error,
    NumericalError,
    Scenario,
    Trajectory,
    ValidationError,
    alt_scheme_run,
    cli_main,
    comparison_bounds,
    diagnose,
    preset_names,
    refine,
    run,
    sqrt_law_fit,
    validate,
)

__all__ = [
    "Error",
    "NumericalError",
    "Scenario",
    "Trajectory",
    "ValidationError",
    "alt_scheme_run",
    "cli_main",
    "comparison_bounds",
    "diagnose",
    "preset_names",
    "refine",
    "run",
    "sqrt_law_fit",
    "validate",
]
__version__ = "0.1.0"
