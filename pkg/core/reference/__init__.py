"""Independent oracles: analytic 1D Lifshitz and the imaginary-frequency grid solver."""

from .grid import (
    GridForceIntegrand,
    ScalarProblem,
    force_freq_grid,
    green_column,
    green_solve_imagfreq,
    scalar_problems,
)
from .lifshitz import lifshitz_1d, lifshitz_1d_cavity, lifshitz_integrand
from .matsubara import (
    MatsubaraSeries,
    frequency_integral,
    matsubara_series,
    matsubara_sum,
    richardson_zero,
)
from .oracle import force_matsubara_grid, kz_integrand, kz_integrate, reference_series

__all__ = [
    "GridForceIntegrand",
    "ScalarProblem",
    "force_freq_grid",
    "green_column",
    "green_solve_imagfreq",
    "scalar_problems",
    "lifshitz_1d",
    "lifshitz_1d_cavity",
    "lifshitz_integrand",
    "MatsubaraSeries",
    "frequency_integral",
    "matsubara_series",
    "matsubara_sum",
    "richardson_zero",
    "force_matsubara_grid",
    "kz_integrand",
    "kz_integrate",
    "reference_series",
]
