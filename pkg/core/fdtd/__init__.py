"""Damped staggered-grid time-domain solver and impulse-response runs."""

from .base import BaseSolver, FieldState
from .run import (
    DipoleSource,
    Probe,
    ResponseSet,
    RunOptions,
    dump_responses,
    modified_energy,
    run_batch,
    run_dipole_response,
    self_response,
)
from .solvers import Solver1D, SolverTE, SolverTM, make_solver

__all__ = [
    "BaseSolver",
    "FieldState",
    "DipoleSource",
    "Probe",
    "ResponseSet",
    "RunOptions",
    "dump_responses",
    "modified_energy",
    "run_batch",
    "run_dipole_response",
    "self_response",
    "Solver1D",
    "SolverTE",
    "SolverTM",
    "make_solver",
]
