"""
Sampled weight spectra on the FDTD window grid xi_m = m * d_xi.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ..errors import ContourError, SynthesisError
from ..model.specs import ContourSpec, TemperatureSpec
from .contour import (
    magnetic_factor,
    sqrt_legendre,
    weight_naive,
    weight_pole_subtracted,
    weight_T0,
)

logger = logging.getLogger(__name__)

PANEL_NODES = 32


class WeightVariant(str, Enum):
    ELECTRIC = "electric"
    MAGNETIC = "magnetic"


class WeightKind(str, Enum):
    T0 = "t0"
    POLE_SUBTRACTED = "pole_subtracted"
    NAIVE = "naive"


@dataclass(frozen=True)
class WeightSpectrum:
    """
    Weight samples at xi_samples (ascending, all > 0).

    `zero_value` is the xi = 0 endpoint of the trapezoid rule. For the
    T=0 and pole-subtracted weights it is chosen so the first panel
    [0, d_xi] integrates exactly, which also absorbs the xi**-1/2 endpoint
    of the electric T=0 weight.
    """

    xi_samples: np.ndarray
    values: np.ndarray
    variant: WeightVariant
    contour: ContourSpec
    temperature: TemperatureSpec
    kind: WeightKind
    zero_value: complex = 0j

    def __post_init__(self):
        if self.xi_samples.shape != self.values.shape:
            raise SynthesisError("spectrum samples and values differ in length")
        if self.xi_samples[0] <= 0.0:
            raise SynthesisError("spectrum samples must start above xi = 0")
        if np.any(np.diff(self.xi_samples) <= 0.0):
            raise SynthesisError("spectrum samples must be strictly ascending")
        if not np.all(np.isfinite(self.values)):
            raise SynthesisError(f"non-finite {self.kind.value} weight in spectrum")

    @property
    def d_xi(self) -> float:
        return float(self.xi_samples[1] - self.xi_samples[0]) if self.xi_samples.size > 1 else float(self.xi_samples[0])

    def scaled(self, factor: complex) -> "WeightSpectrum":
        return replace(self, values=self.values * factor, zero_value=self.zero_value * factor)


def panel_zero_value(weight: Callable[[np.ndarray], np.ndarray], d_xi: float) -> complex:
    """xi = 0 value that makes the trapezoid panel [0, d_xi] exact for `weight`."""
    xi, w = sqrt_legendre(0.0, d_xi, PANEL_NODES)
    integral = np.dot(w, np.asarray(weight(xi)))
    edge = np.asarray(weight(np.array([d_xi])))[0]
    return complex(2.0 * integral / d_xi - edge)


def spectrum_grid(contour: ContourSpec) -> np.ndarray:
    """xi_1 .. xi_M with xi_M = xi_max."""
    return contour.d_xi * np.arange(1, contour.n_xi + 1)


def build_spectrum(
    contour: ContourSpec,
    temperature: TemperatureSpec,
    kind: Optional[WeightKind] = None,
    zero_bin_value: float = 0.0,
) -> WeightSpectrum:
    """
    Electric weight spectrum on the contour's grid.

    Args:
        contour: Conductivity and band
        temperature: Run temperature
        kind: Weight formula; defaults to T0 at zero temperature and
            pole-subtracted otherwise
        zero_bin_value: xi = 0 value substituted for the naive weight,
            applied as -i * zero_bin_value

    Returns:
        Electric-variant WeightSpectrum
    """
    if kind is None:
        kind = WeightKind.T0 if temperature.is_zero else WeightKind.POLE_SUBTRACTED
    xi = spectrum_grid(contour)
    sigma = contour.sigma

    if kind == WeightKind.T0:
        values = np.asarray(weight_T0(xi, sigma))
        zero = panel_zero_value(lambda x: weight_T0(x, sigma), contour.d_xi) if sigma > 0.0 else 0j
    elif kind == WeightKind.POLE_SUBTRACTED:
        if temperature.is_zero:
            raise ContourError("pole-subtracted weight needs a nonzero temperature")
        contour.require_zero_mode(temperature)
        values = np.asarray(weight_pole_subtracted(xi, sigma, temperature.omega_T))
        omega_T = temperature.omega_T
        zero = panel_zero_value(lambda x: weight_pole_subtracted(x, sigma, omega_T), contour.d_xi)
    else:
        if temperature.is_zero:
            raise ContourError("naive weight needs a nonzero temperature")
        values = np.asarray(weight_naive(xi, sigma, temperature.omega_T))
        # Only the imaginary axis survives synthesis at xi = 0.
        zero = -1j * zero_bin_value

    logger.debug(
        f"{kind.value} spectrum: {xi.size} bins up to xi={xi[-1]:.4g}, sigma={sigma}, tau={temperature.tau}"
    )
    return WeightSpectrum(
        xi_samples=xi,
        values=values,
        variant=WeightVariant.ELECTRIC,
        contour=contour,
        temperature=temperature,
        kind=kind,
        zero_value=zero,
    )


def magnetic_variant(spectrum: WeightSpectrum) -> WeightSpectrum:
    """
    Divide an electric spectrum by (1 + i*sigma/xi).

    The divisor diverges at xi = 0, so the magnetic endpoint is 0 whenever
    sigma > 0; with sigma = 0 the map is the identity. The naive control
    keeps its caller-supplied endpoint.
    """
    if spectrum.variant != WeightVariant.ELECTRIC:
        raise ContourError("magnetic variant is built from an electric spectrum")
    sigma = spectrum.contour.sigma
    values = spectrum.values / np.asarray(magnetic_factor(spectrum.xi_samples, sigma))
    keep = sigma == 0.0 or spectrum.kind == WeightKind.NAIVE
    zero = spectrum.zero_value if keep else 0j
    return replace(spectrum, values=values, variant=WeightVariant.MAGNETIC, zero_value=zero)
