"""
1D Lifshitz force between perfect mirrors.

At imaginary frequency xi the integrand is

    f(xi) = -(1/pi) * xi / (exp(2*xi*a) - 1)

so F(T=0) = -pi/(24 a^2) and the zero-frequency term is -T/(2a).
"""

import logging
import math
from typing import Optional

import numpy as np

from ..errors import GeometryError
from ..force.integrate import ForceResult
from ..model.geometry import Geometry, GeometryKind
from ..model.specs import TemperatureSpec
from .matsubara import matsubara_series

logger = logging.getLogger(__name__)


def lifshitz_integrand(xi: float, a: float) -> float:
    """f(xi) for a cavity of length a; f(0+) = -1/(2*pi*a)."""
    if xi <= 0.0:
        return -1.0 / (2.0 * math.pi * a)
    with np.errstate(over="ignore"):
        return float(-xi / np.expm1(2.0 * xi * a) / math.pi)


def lifshitz_1d(a: float, tau: float, reference_length: Optional[float] = None) -> ForceResult:
    """
    Force per area on a perfect mirror at separation a (F < 0 attractive).

    Args:
        a: Separation in cells
        tau: Dimensionless temperature T * reference_length
        reference_length: Length tau is measured against (defaults to a)

    Returns:
        ForceResult with the Matsubara n = 0 / n > 0 split
    """
    if a <= 0.0:
        raise GeometryError(f"separation must be positive, got {a}")
    temperature = TemperatureSpec(tau=tau, a=reference_length or a)
    if temperature.is_zero:
        return ForceResult.from_parts(0.0, -math.pi / (24.0 * a * a), params={"a": a, "tau": tau})

    series = matsubara_series(
        lambda xi: lifshitz_integrand(xi, a),
        temperature.omega_T,
        tail_tol=1e-14,
        zero_value=lifshitz_integrand(0.0, a),
    )
    return ForceResult.from_parts(series.zero_part, series.positive_part, params={"a": a, "tau": tau})


def lifshitz_1d_cavity(geometry: Geometry, tau: float) -> ForceResult:
    """
    Oracle for the closed 1D plate layout: gap-cavity force minus the
    force of the outer pad cavity behind the body, both at the gap's T.
    """
    if geometry.kind != GeometryKind.PARALLEL_PLATES_1D or geometry.a is None:
        raise GeometryError("cavity oracle is defined for the 1D plate layout")
    inner = lifshitz_1d(geometry.a, tau)
    outer = lifshitz_1d(geometry.pad, tau, reference_length=geometry.a)
    return ForceResult.from_parts(
        inner.n0_part - outer.n0_part,
        inner.npos_part - outer.npos_part,
        params={"a": geometry.a, "pad": geometry.pad, "tau": tau},
    )
