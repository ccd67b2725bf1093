"""
Force integration.

    npos = (1/pi) * sum_k dt * [g_E(t_k) gamma_E(t_k) + g_H(t_k) gamma_H(t_k)]
    n0   = sigma*T * sum_k dt * gamma_E(t_k)  +  T * static_H

static_H is the late-time level of the magnetic trace (removed from
gamma_H before integration); it carries the magnetic zero-frequency term
and, through the static step weight, its share of npos.
F < 0 is attractive.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable

import numpy as np

from ..errors import ContourError, SynthesisError
from ..model.specs import TemperatureSpec
from ..stress.trace import StressTrace
from ..weights.spectrum import WeightKind
from ..weights.synthesis import DEFAULT_TAPER_FRACTION, WeightFunction, weight_pair

logger = logging.getLogger(__name__)


@dataclass
class ForceResult:
    """Force with its zero-frequency / positive-frequency split."""

    total: float
    n0_part: float
    npos_part: float
    per_polarization: Dict[str, "ForceResult"] = field(default_factory=dict)
    params: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_parts(cls, n0_part: float, npos_part: float, **kwargs) -> "ForceResult":
        return cls(total=n0_part + npos_part, n0_part=n0_part, npos_part=npos_part, **kwargs)

    @classmethod
    def combine(cls, parts: Dict[str, "ForceResult"], **kwargs) -> "ForceResult":
        """Sum of per-polarization results, accumulated in sorted key order."""
        n0 = 0.0
        npos = 0.0
        for key in sorted(parts):
            n0 += parts[key].n0_part
            npos += parts[key].npos_part
        return cls.from_parts(n0, npos, per_polarization=dict(parts), **kwargs)

    def scaled(self, factor: float) -> "ForceResult":
        return ForceResult(
            total=self.total * factor,
            n0_part=self.n0_part * factor,
            npos_part=self.npos_part * factor,
            per_polarization={k: v.scaled(factor) for k, v in self.per_polarization.items()},
            params=dict(self.params),
        )


def _check_window(trace: StressTrace, g: WeightFunction) -> None:
    if abs(trace.dt - g.dt) > 1e-12 * trace.dt:
        raise SynthesisError(f"dt mismatch: trace {trace.dt} vs weight {g.dt}")
    if len(g) < len(trace):
        raise SynthesisError(f"window mismatch: weight has {len(g)} samples, trace {len(trace)}")


def _zero_mode(trace: StressTrace, constant: float, temperature: float) -> float:
    electric = constant * trace.dt * float(np.sum(trace.gamma_E))
    return electric + temperature * trace.static_H


def _npos(trace: StressTrace, gE: WeightFunction, gH: WeightFunction) -> float:
    n = len(trace)
    integral = np.dot(gE.values[:n], trace.gamma_E) + np.dot(gH.values[:n], trace.gamma_H)
    step = gH.step_weight * trace.static_H
    return float(trace.dt * integral / math.pi) + step


def zero_mode_force(trace: StressTrace, sigma: float, temperature: TemperatureSpec) -> float:
    """
    Zero-frequency force: sigma*T times the time-integrated electric trace
    plus T times the static magnetic level.

    Raises:
        ContourError: tau > 0 with sigma = 0
    """
    if temperature.is_zero:
        return 0.0
    if sigma <= 0.0:
        raise ContourError("zero-frequency contribution requires σ > 0")
    return _zero_mode(trace, sigma * temperature.temperature, temperature.temperature)


def integrate_force(trace: StressTrace, gE: WeightFunction, gH: WeightFunction) -> ForceResult:
    """
    Force from one stress trace and its electric/magnetic weights.

    Args:
        trace: Stress trace (static magnetic level already removed)
        gE: Electric weight carrying the zero-mode constant
        gH: Magnetic weight

    Returns:
        ForceResult with n0_part + npos_part = total
    """
    _check_window(trace, gE)
    _check_window(trace, gH)
    npos = _npos(trace, gE, gH)

    n0 = 0.0
    if gE.temperature > 0.0:
        n0 = _zero_mode(trace, gE.zero_mode_constant, gE.temperature)
    logger.debug(f"{trace.polarization.value} force: n0={n0:.6e}, npos={npos:.6e}")
    return ForceResult.from_parts(n0, npos, params={"dt": trace.dt, "steps": len(trace)})


def force_from_traces(
    traces: Iterable[StressTrace],
    sigma: float,
    temperature: TemperatureSpec,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
) -> ForceResult:
    """Synthesize weights per trace window and sum over polarizations."""
    parts: Dict[str, ForceResult] = {}
    for trace in traces:
        gE, gH = weight_pair(sigma, temperature, trace.dt, len(trace), taper_fraction)
        parts[trace.polarization.value] = integrate_force(trace, gE, gH)
    return ForceResult.combine(parts, params={"sigma": sigma, "tau": temperature.tau})


def integrate_force_naive(
    trace: StressTrace,
    sigma: float,
    temperature: TemperatureSpec,
    zero_bin_value: float = 0.0,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
) -> float:
    """
    Force from the naive coth weight with an arbitrary xi = 0 bin.

    Kept as a negative control: the pole at xi = 0 makes the result depend
    on `zero_bin_value`.
    """
    if temperature.is_zero:
        raise SynthesisError("naive control needs tau > 0")
    gE, gH = weight_pair(
        sigma, temperature, trace.dt, len(trace), taper_fraction,
        kind=WeightKind.NAIVE, zero_bin_value=zero_bin_value,
    )
    return _npos(trace, gE, gH)


def force_naive_from_traces(
    traces: Iterable[StressTrace],
    sigma: float,
    temperature: TemperatureSpec,
    zero_bin_value: float = 0.0,
    taper_fraction: float = DEFAULT_TAPER_FRACTION,
) -> ForceResult:
    parts = {
        t.polarization.value: ForceResult.from_parts(
            0.0, integrate_force_naive(t, sigma, temperature, zero_bin_value, taper_fraction)
        )
        for t in traces
    }
    return ForceResult.combine(parts, params={"sigma": sigma, "tau": temperature.tau})
