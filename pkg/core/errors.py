"""
Exception hierarchy shared by the engine and the command-line surface.

Precondition failures subclass ValueError, failures that only show up
while running subclass RuntimeError, so callers that only know the
builtin types still catch them.
"""

from typing import Optional


class CasimirError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(CasimirError, ValueError):
    """A geometry or mask precondition is violated."""


class ContourError(CasimirError, ValueError):
    """A contour, temperature or weight precondition is violated."""


class SynthesisError(CasimirError, ValueError):
    """Spectrum sampling or time-window inconsistency."""


class StabilityError(CasimirError, ValueError):
    """Time step above the Courant limit of the grid."""


class NonDecayingRunError(CasimirError, RuntimeError):
    """Time-domain run did not meet the trailing-window decay criterion."""

    def __init__(self, steps: int, ratio: float):
        self.steps = steps
        self.ratio = ratio
        super().__init__(
            f"non-decaying run: tail ratio {ratio:.3e} after {steps} steps "
            "(sigma too small or max_steps too low)"
        )

    def __reduce__(self):
        return (type(self), (self.steps, self.ratio))


class SolverError(CasimirError, RuntimeError):
    """Linear solve or series summation failed."""


class ConfigError(CasimirError, ValueError):
    """Run configuration could not be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.raw_message = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.raw_message, self.line))
