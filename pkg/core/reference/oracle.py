"""Frequency-domain forces assembled from the grid integrand."""

import logging
import math
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from ..force.integrate import ForceResult
from ..model.geometry import StressSurface
from ..model.mask import PECMask
from ..model.specs import TemperatureSpec
from ..model.staggering import Polarization
from .grid import GridForceIntegrand
from .matsubara import MatsubaraSeries, frequency_integral, matsubara_series, richardson_zero

logger = logging.getLogger(__name__)

ZERO_XI = 1e-2
DEFAULT_NODES = 48


def _series_for(f: Callable[[float], float], temperature: TemperatureSpec, tail_tol: float) -> MatsubaraSeries:
    return matsubara_series(f, temperature.omega_T, tail_tol=tail_tol, zero_value=richardson_zero(f, ZERO_XI))


def force_matsubara_grid(
    mask: PECMask,
    temperature: TemperatureSpec,
    polarizations: Sequence[Polarization],
    surface: StressSurface,
    direction: int = 0,
    tail_tol: float = 1e-8,
    n_nodes: int = DEFAULT_NODES,
) -> ForceResult:
    """
    Grid-oracle force: Matsubara sum for tau > 0, mapped Gauss-Legendre
    integral at tau = 0.

    Args:
        mask: Rasterized geometry
        temperature: tau and its reference length
        polarizations: Polarizations to sum
        surface: Stress surface of the body
        direction: Force component
        tail_tol: Relative Matsubara tail tolerance
        n_nodes: Quadrature nodes for tau = 0

    Returns:
        ForceResult with per-polarization parts
    """
    parts: Dict[str, ForceResult] = {}
    for polarization in polarizations:
        polarization = Polarization(polarization)
        f = GridForceIntegrand(mask, polarization, surface, direction)
        if temperature.is_zero:
            total = frequency_integral(f, 1.0 / temperature.a, n_nodes)
            parts[polarization.value] = ForceResult.from_parts(0.0, total)
        else:
            series = _series_for(f, temperature, tail_tol)
            logger.debug(f"{polarization.value} Matsubara sum: {series.truncation} terms")
            parts[polarization.value] = ForceResult.from_parts(series.zero_part, series.positive_part)
    return ForceResult.combine(parts, params={"tau": temperature.tau, "method": "reference"})


def reference_series(
    mask: PECMask,
    temperature: TemperatureSpec,
    polarization: Polarization,
    surface: StressSurface,
    direction: int = 0,
    tail_tol: float = 1e-8,
) -> MatsubaraSeries:
    """Matsubara terms of one polarization, for tabulation."""
    f = GridForceIntegrand(mask, polarization, surface, direction)
    return _series_for(f, temperature, tail_tol)


def kz_integrand(f: Callable[[float], float], xi: float, kz_scale: float, n_kz: int = 32) -> float:
    """(1/pi) * integral_0^inf f(sqrt(xi^2 + kz^2)) d kz."""
    return frequency_integral(lambda kz: f(math.hypot(xi, kz)), kz_scale, n_kz) / math.pi


def kz_integrate(
    mask: PECMask,
    temperature: TemperatureSpec,
    surface: StressSurface,
    polarizations: Sequence[Polarization] = (Polarization.TE, Polarization.TM),
    kz_max: Optional[float] = None,
    n_kz: int = 32,
    direction: int = 0,
    tail_tol: float = 1e-6,
) -> ForceResult:
    """
    Force per unit length of a z-invariant 3D geometry whose cross-section
    is the 2D layout: every 2D frequency xi becomes sqrt(xi^2 + kz^2).

    Args:
        kz_max: Finite kz cutoff with Gauss-Legendre on [0, kz_max];
            None maps (0, inf) instead
        n_kz: kz quadrature nodes
    """
    scale = 1.0 / temperature.a
    if kz_max is not None:
        x, w = np.polynomial.legendre.leggauss(n_kz)
        kz_nodes = 0.5 * kz_max * (x + 1.0)
        kz_weights = 0.5 * kz_max * w

    parts: Dict[str, ForceResult] = {}
    for polarization in polarizations:
        f2 = GridForceIntegrand(mask, polarization, surface, direction)

        def f3(xi: float, f2=f2) -> float:
            if kz_max is None:
                return kz_integrand(f2, xi, scale, n_kz)
            return float(sum(wk * f2(math.hypot(xi, k)) for k, wk in zip(kz_nodes, kz_weights))) / math.pi

        if temperature.is_zero:
            parts[Polarization(polarization).value] = ForceResult.from_parts(0.0, frequency_integral(f3, scale, n_kz))
        else:
            series = matsubara_series(f3, temperature.omega_T, tail_tol=tail_tol, zero_value=f3(0.0))
            parts[Polarization(polarization).value] = ForceResult.from_parts(series.zero_part, series.positive_part)
    return ForceResult.combine(parts, params={"tau": temperature.tau, "method": "kz"})
