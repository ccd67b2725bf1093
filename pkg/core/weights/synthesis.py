"""
Time-domain weight synthesis.

    g(t) = Im  integral_0^xi_max  taper(xi) * g(xi) * exp(i*xi*t) d xi

sampled at the FDTD response delays t_k = (k + 1/2) * dt. The integral is
the trapezoidal rule on the uniform spectrum grid, evaluated for all t_k
at once with an inverse FFT of length N = 2*pi / (d_xi * dt). The 1/pi
prefactor of the force integral is applied by the force integrator.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..errors import SynthesisError
from ..model.specs import ContourSpec, TemperatureSpec
from .contour import coth_minus_inverse, omega_contour, sqrt_legendre
from .spectrum import WeightKind, WeightSpectrum, WeightVariant, build_spectrum, magnetic_variant

logger = logging.getLogger(__name__)

DEFAULT_TAPER_FRACTION = 0.1


@dataclass(frozen=True)
class WeightFunction:
    """Sampled g(t_k) plus the separately stored sigma*k_B*T constant."""

    dt: float
    values: np.ndarray
    variant: WeightVariant
    zero_mode_constant: float = 0.0
    temperature: float = 0.0
    kind: WeightKind = WeightKind.T0
    step_weight: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise SynthesisError("time weight contains non-finite samples")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def times(self) -> np.ndarray:
        return (np.arange(self.values.size) + 0.5) * self.dt


def raised_cosine_taper(xi: np.ndarray, xi_max: float, fraction: float = DEFAULT_TAPER_FRACTION) -> np.ndarray:
    """1 below (1 - fraction)*xi_max, falling to 0 at xi_max along a half cosine."""
    if not 0.0 <= fraction < 1.0:
        raise SynthesisError(f"taper fraction must be in [0, 1), got {fraction}")
    taper = np.ones_like(xi, dtype=float)
    if fraction == 0.0:
        return taper
    start = (1.0 - fraction) * xi_max
    ramp = xi > start
    taper[ramp] = 0.5 * (1.0 + np.cos(np.pi * (xi[ramp] - start) / (xi_max - start)))
    return taper


def _fft_length(d_xi: float, dt: float) -> int:
    exact = 2.0 * math.pi / (d_xi * dt)
    n = int(round(exact))
    if n < 2 or abs(exact - n) > 1e-6 * exact:
        raise SynthesisError(
            f"spectrum spacing {d_xi:.6g} does not match a whole time window at dt={dt}"
        )
    return n


def synthesize_time_weight(
    spectrum: WeightSpectrum,
    dt: float,
    n_steps: int,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
) -> WeightFunction:
    """
    Inverse Fourier synthesis of a weight spectrum.

    Args:
        spectrum: Uniform spectrum starting at d_xi
        dt: FDTD time step
        n_steps: Number of samples to return
        taper_fraction: Share of the band under the raised-cosine roll-off

    Returns:
        Real WeightFunction with n_steps samples at t_k = (k + 1/2) dt
    """
    xi = spectrum.xi_samples
    d_xi = spectrum.d_xi
    if not np.allclose(np.diff(xi), d_xi, rtol=1e-9, atol=0.0) or abs(xi[0] - d_xi) > 1e-9 * d_xi:
        raise SynthesisError("synthesis needs the uniform grid xi_m = m * d_xi")
    if xi[-1] > math.pi / dt * (1.0 + 1e-12):
        raise SynthesisError(f"spectrum cutoff {xi[-1]:.6g} above Nyquist {math.pi / dt:.6g}")

    n_fft = _fft_length(d_xi, dt)
    if n_steps > n_fft:
        raise SynthesisError(f"requested {n_steps} samples but the spectrum period holds {n_fft}")

    grid = np.concatenate(([0.0], xi))
    coeffs = np.concatenate(([spectrum.zero_value], spectrum.values)).astype(complex)
    quad = np.full(grid.size, d_xi)
    quad[0] = quad[-1] = 0.5 * d_xi
    coeffs *= quad * raised_cosine_taper(grid, xi[-1], taper_fraction)
    coeffs *= np.exp(0.5j * grid * dt)

    padded = np.zeros(n_fft, dtype=complex)
    padded[: coeffs.size] = coeffs
    values = np.imag(n_fft * np.fft.ifft(padded))[:n_steps]

    logger.debug(f"synthesized {spectrum.variant.value} {spectrum.kind.value} weight: {n_steps} samples, fft {n_fft}")
    return WeightFunction(
        dt=dt,
        values=values,
        variant=spectrum.variant,
        temperature=spectrum.temperature.temperature,
        kind=spectrum.kind,
    )


def augment_zero_mode(g: WeightFunction, contour: ContourSpec, temperature: TemperatureSpec) -> WeightFunction:
    """
    Attach sigma*T to a weight function; the time samples are unchanged.

    Raises:
        ContourError: tau > 0 with sigma = 0
    """
    constant = contour.zero_mode_constant(temperature)
    return replace(g, zero_mode_constant=constant, temperature=temperature.temperature)


def window_contour(sigma: float, dt: float, n_steps: int) -> ContourSpec:
    """Contour whose grid synthesizes exactly `n_steps` (rounded up to even) samples."""
    even = n_steps + (n_steps % 2)
    return ContourSpec.for_window(sigma, dt, even)


def weight_pair(
    sigma: float,
    temperature: TemperatureSpec,
    dt: float,
    n_steps: int,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    kind: Optional[WeightKind] = None,
    zero_bin_value: float = 0.0,
    oversample: int = 4,
) -> Tuple[WeightFunction, WeightFunction]:
    """
    Electric and magnetic time weights for one run window.

    Both carry the zero-mode constant; the default kind is T0 at zero
    temperature and pole-subtracted otherwise. The magnetic weight also
    carries the static step weight unless the kind is naive. The spectrum grid spans
    `oversample` windows so periodic images of g(t) land beyond the trace.
    """
    if oversample < 1:
        raise SynthesisError(f"oversample must be >= 1, got {oversample}")
    contour = window_contour(sigma, dt, oversample * n_steps)
    electric = build_spectrum(contour, temperature, kind, zero_bin_value)
    magnetic = magnetic_variant(electric)
    pair = tuple(
        augment_zero_mode(synthesize_time_weight(s, dt, n_steps, taper_fraction), contour, temperature)
        for s in (electric, magnetic)
    )
    electric_g, magnetic_g = pair
    if electric.kind != WeightKind.NAIVE:
        step = static_step_weight(sigma, temperature, dt, taper_fraction)
        magnetic_g = replace(magnetic_g, step_weight=step)
    return electric_g, magnetic_g


STEP_NODES = 96


def static_step_weight(
    sigma: float,
    temperature: TemperatureSpec,
    dt: float,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
    n_nodes: int = STEP_NODES,
) -> float:
    """
    Positive-frequency weight of a magnetic level that stays on forever.

    The FDTD loop subtracts each magnetic probe's late-time level before
    integration. Summing a constant over t_k = (k + 1/2) dt against the
    magnetic weight gives

        (1/pi) Im integral taper * g_H(xi) * i*dt / (2 sin(xi*dt/2)) d xi

    which this returns; multiply by the static level to restore the
    missing npos term. At zero temperature it is close to sigma/(2*pi).
    """
    if sigma <= 0.0:
        return 0.0
    xi_max = math.pi / dt
    start = (1.0 - taper_fraction) * xi_max
    edges = [0.0, start, xi_max] if taper_fraction > 0.0 else [0.0, xi_max]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        xi, w = sqrt_legendre(lo, hi, n_nodes)
        omega = np.asarray(omega_contour(xi, sigma))
        derivative = (xi + 0.5j * sigma) / omega
        if temperature.is_zero:
            thermal = np.ones_like(omega)
        else:
            thermal = coth_minus_inverse(omega / temperature.omega_T)
        discrete = 0.5 * xi * dt / np.sin(0.5 * xi * dt)
        integrand = raised_cosine_taper(xi, xi_max, taper_fraction) * thermal * derivative * discrete
        total += float(np.imag(np.dot(w, integrand)))
    return total / math.pi
