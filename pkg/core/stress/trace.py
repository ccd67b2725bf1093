"""
Surface-integrated stress trace.

For a closed surface around the body, the force along axis i is

    F_i = sum_points  sign * dA * T_{i,n}(point)
    T_ij = <E_i E_j> + <H_i H_j> - 1/2 delta_ij (sum_k <E_k E_k> + sum_k <H_k H_k>)

with every correlator replaced by the same-point impulse response of the
grid. E-sourced terms build gamma_E and H-sourced terms gamma_H; the two
are integrated against different weights, so they are kept apart.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..model.geometry import StressSurface, SurfacePoint
from ..model.mask import PECMask
from ..model.staggering import FieldType, Polarization, component_axis, components, field_type_of
from ..fdtd.run import DipoleSource, Probe, RunOptions, run_batch

logger = logging.getLogger(__name__)

DEFAULT_BATCH = 64

# (source component, probe component) -> coefficient
Terms = Dict[Tuple[str, str], float]


@dataclass
class StressTrace:
    """Electric and magnetic stress series of one polarization and force direction."""

    dt: float
    gamma_E: np.ndarray
    gamma_H: np.ndarray
    polarization: Polarization
    direction: int
    static_H: float = 0.0
    n_simulations: int = 0
    geometry: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        n = max(self.gamma_E.size, self.gamma_H.size)
        self.gamma_E = np.pad(self.gamma_E, (0, n - self.gamma_E.size))
        self.gamma_H = np.pad(self.gamma_H, (0, n - self.gamma_H.size))

    def __len__(self) -> int:
        return int(self.gamma_E.size)

    @property
    def total(self) -> np.ndarray:
        return self.gamma_E + self.gamma_H


def point_terms(point: SurfacePoint, polarization: Polarization, direction: int) -> Terms:
    """Correlator coefficients of sign*dA*T_{direction, normal} at one point."""
    scale = point.normal_sign * point.element
    terms: Terms = {}
    for field_type in (FieldType.ELECTRIC, FieldType.MAGNETIC):
        names = components(polarization, field_type)
        if direction == point.normal_axis:
            for c in names:
                terms[(c, c)] = scale * ((component_axis(c) == direction) - 0.5)
        else:
            along = [c for c in names if component_axis(c) == direction]
            normal = [c for c in names if component_axis(c) == point.normal_axis]
            for ci in along:
                for cn in normal:
                    # both orderings, averaged
                    terms[(cn, ci)] = terms.get((cn, ci), 0.0) + 0.5 * scale
                    terms[(ci, cn)] = terms.get((ci, cn), 0.0) + 0.5 * scale
    return {key: value for key, value in terms.items() if value != 0.0}


def _simulations(surface: StressSurface, polarization: Polarization, direction: int):
    """Canonical list of (point index, source component, probe components, terms)."""
    plan = []
    order = {c: k for k, c in enumerate(components(polarization, FieldType.ELECTRIC) + components(polarization, FieldType.MAGNETIC))}
    for p, point in enumerate(surface.points):
        terms = point_terms(point, polarization, direction)
        sources = sorted({src for src, _ in terms}, key=order.get)
        for src in sources:
            probes = sorted({dst for s, dst in terms if s == src}, key=order.get)
            plan.append((p, src, probes, {dst: terms[(src, dst)] for dst in probes}))
    return plan


def assemble_stress_trace(
    mask: PECMask,
    surface: StressSurface,
    polarization: Polarization,
    direction: int,
    options: RunOptions,
    batch_size: int = DEFAULT_BATCH,
    point_order: Optional[Sequence[int]] = None,
) -> StressTrace:
    """
    Run the surface simulations and accumulate the stress trace.

    Args:
        mask: Rasterized geometry
        surface: Closed surface around the body
        polarization: Field set
        direction: Force component (0 = x, 1 = y)
        options: Run options shared by all simulations
        batch_size: Simulations advanced together
        point_order: Execution order of surface points; accumulation
            always follows the canonical surface order

    Returns:
        StressTrace

    Raises:
        NonDecayingRunError: From any simulation
    """
    polarization = Polarization(polarization)
    plan = _simulations(surface, polarization, direction)
    if point_order is not None:
        rank = {p: k for k, p in enumerate(point_order)}
        execution = sorted(range(len(plan)), key=lambda k: (rank[plan[k][0]], k))
    else:
        execution = list(range(len(plan)))

    logger.info(
        f"stress trace: {polarization.value}, direction {direction}, "
        f"{len(surface)} points, {len(plan)} simulations"
    )

    results: Dict[int, Tuple[np.ndarray, float, FieldType]] = {}
    dt = options.courant
    for start in range(0, len(execution), batch_size):
        chunk = execution[start:start + batch_size]
        by_type: Dict[FieldType, List[int]] = {}
        for k in chunk:
            by_type.setdefault(field_type_of(plan[k][1]), []).append(k)
        for field_type, ks in by_type.items():
            sources = []
            probes = []
            for k in ks:
                p, src, dsts, _ = plan[k]
                position = surface.points[p].position
                sources.append(DipoleSource(position=position, component=src))
                probes.append([Probe(position=position, component=d) for d in dsts])
            responses = run_batch(mask, polarization, sources, probes, options)
            for k, response in zip(ks, responses):
                p, src, dsts, coeffs = plan[k]
                position = tuple(surface.points[p].position)
                n = response.n_steps
                series = np.zeros(n)
                static = 0.0
                for d in dsts:
                    series += coeffs[d] * response[(position, d)]
                    static += coeffs[d] * response.static_levels.get((position, d), 0.0)
                results[k] = (series, static, field_type)
                dt = response.dt
            logger.debug(f"finished {len(ks)} {field_type.value} simulations ({start + len(chunk)}/{len(plan)})")

    n_max = max((s.size for s, _, _ in results.values()), default=0)
    gamma = {FieldType.ELECTRIC: np.zeros(n_max), FieldType.MAGNETIC: np.zeros(n_max)}
    static_H = 0.0
    for k in range(len(plan)):
        series, static, field_type = results[k]
        gamma[field_type][: series.size] += series
        if field_type == FieldType.MAGNETIC:
            static_H += static

    return StressTrace(
        dt=dt,
        gamma_E=gamma[FieldType.ELECTRIC],
        gamma_H=gamma[FieldType.MAGNETIC],
        polarization=polarization,
        direction=direction,
        static_H=static_H,
        n_simulations=len(plan),
    )


def dump_trace(trace: StressTrace, path: Path) -> None:
    """CSV with columns step, gamma_E, gamma_H."""
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(
        {"step": np.arange(len(trace)), "gamma_E": trace.gamma_E, "gamma_H": trace.gamma_H}
    ).to_csv(path, index=False)
    logger.debug(f"dumped stress trace to {path}")
