"""Force integration with zero-frequency / positive-frequency split."""

from .integrate import (
    ForceResult,
    force_from_traces,
    force_naive_from_traces,
    integrate_force,
    integrate_force_naive,
    zero_mode_force,
)

__all__ = [
    "ForceResult",
    "force_from_traces",
    "force_naive_from_traces",
    "integrate_force",
    "integrate_force_naive",
    "zero_mode_force",
]
