"""
Impulse-response runs.

A unit current pulse (amplitude 1/dt for one step) is injected through the
interpolation stencil of its component; probes read fields through the same
kind of stencil. E probes sample E^{n+1} and H probes sample H^{n+1/2}
after step n, so sample k of every series sits at delay (k + 1/2) dt from
its pulse.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import GeometryError, NonDecayingRunError
from ..model.geometry import StressSurface
from ..model.mask import PECMask
from ..model.staggering import (
    FieldType,
    Polarization,
    all_components,
    component_shape,
    field_type_of,
    interpolation_stencil,
)
from .solvers import make_solver

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 40000
DEFAULT_TAIL_TOL = 1e-6
TAIL_FRACTION = 0.05
CHECK_EVERY = 100
MIN_STEPS = 200
SOURCE_CLEARANCE = 0.5


@dataclass(frozen=True)
class DipoleSource:
    """Point current pulse; an E component means an electric current."""

    position: Tuple[float, ...]
    component: str
    amplitude: float = 1.0

    @property
    def field_type(self) -> FieldType:
        return field_type_of(self.component)

    @property
    def current_type(self) -> str:
        return "electric_current" if self.field_type == FieldType.ELECTRIC else "magnetic_current"

    def validate(self, mask: PECMask, polarization: Polarization) -> None:
        if self.component not in all_components(polarization):
            raise GeometryError(f"component {self.component} does not exist for {polarization.value}")
        if len(self.position) != mask.occupancy.ndim:
            raise GeometryError(f"source position {self.position} has the wrong dimension")
        if not mask.is_vacuum(self.position, SOURCE_CLEARANCE):
            raise GeometryError(f"source at {self.position} is not in vacuum")


@dataclass(frozen=True)
class Probe:
    position: Tuple[float, ...]
    component: str


@dataclass
class ResponseSet:
    """
    Recorded series for one source, keyed by (probe position, component).

    `static_levels` holds the late-time level removed from each series
    (nonzero only for magnetic probes).
    """

    source: DipoleSource
    dt: float
    series: Dict[Tuple[Tuple[float, ...], str], np.ndarray]
    static_levels: Dict[Tuple[Tuple[float, ...], str], float] = field(default_factory=dict)

    @property
    def n_steps(self) -> int:
        return len(next(iter(self.series.values()))) if self.series else 0

    def __getitem__(self, key: Tuple[Tuple[float, ...], str]) -> np.ndarray:
        return self.series[key]


@dataclass
class RunOptions:
    """Numerical knobs shared by every run of a sweep point."""

    sigma: float
    courant: float = 0.5
    max_steps: int = DEFAULT_MAX_STEPS
    tail_tol: float = DEFAULT_TAIL_TOL
    remove_static: bool = True
    dump_dir: Optional[Path] = None


def _stencil_arrays(component: str, position, cells, batch_index: int, shape) -> Tuple[np.ndarray, np.ndarray]:
    stencil = interpolation_stencil(component, position, cells)
    size = int(np.prod(shape))
    flat = [batch_index * size + int(np.ravel_multi_index(idx, shape)) for idx, _ in stencil]
    weights = [w for _, w in stencil]
    return np.asarray(flat, dtype=np.intp), np.asarray(weights)


class _Recorder:
    """Vectorized probe readout: one bincount per component."""

    def __init__(self, probes: Sequence[Sequence[Probe]], cells, n_steps: int):
        self.channels: List[Tuple[int, Probe]] = [(b, p) for b, group in enumerate(probes) for p in group]
        self.by_component: Dict[str, Tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        parts: Dict[str, List[Tuple[np.ndarray, np.ndarray, np.ndarray]]] = {}
        for ch, (b, probe) in enumerate(self.channels):
            shape = component_shape(probe.component, cells)
            flat, w = _stencil_arrays(probe.component, probe.position, cells, b, shape)
            parts.setdefault(probe.component, []).append((flat, w, np.full(flat.size, ch)))
        for name, chunks in parts.items():
            self.by_component[name] = tuple(np.concatenate(col) for col in zip(*chunks))
        self.data = np.zeros((len(self.channels), n_steps))

    def record(self, fields: Dict[str, np.ndarray], k: int) -> None:
        n = len(self.channels)
        for name, (flat, w, ch) in self.by_component.items():
            values = fields[name].reshape(-1)[flat] * w
            self.data[:, k] += np.bincount(ch, weights=values, minlength=n)


def _pulse(sources: Sequence[DipoleSource], cells, dt: float) -> Tuple[Dict[str, np.ndarray], Dict[str, np.ndarray]]:
    J: Dict[str, np.ndarray] = {}
    K: Dict[str, np.ndarray] = {}
    batch = len(sources)
    for b, source in enumerate(sources):
        target = J if source.field_type == FieldType.ELECTRIC else K
        shape = component_shape(source.component, cells)
        if source.component not in target:
            target[source.component] = np.zeros((batch,) + shape)
        for idx, w in interpolation_stencil(source.component, source.position, cells):
            target[source.component][(b,) + idx] += source.amplitude * w / dt
    return J, K


def _tail_ratios(data: np.ndarray, n: int, static: np.ndarray) -> np.ndarray:
    """Per-channel late-window peak over overall peak; silent channels count as decayed."""
    window = max(1, int(np.ceil(TAIL_FRACTION * n)))
    series = data[:, :n] - static[:, None]
    peak = np.abs(series).max(axis=1)
    tail = np.abs(series[:, n - window:n]).max(axis=1)
    return np.divide(tail, peak, out=np.zeros_like(tail), where=peak > 0.0)


def _static_estimate(data: np.ndarray, n: int, magnetic: np.ndarray) -> np.ndarray:
    window = max(1, int(np.ceil(TAIL_FRACTION * n)))
    static = data[:, n - window:n].mean(axis=1)
    return np.where(magnetic, static, 0.0)


def run_batch(
    mask: PECMask,
    polarization: Polarization,
    sources: Sequence[DipoleSource],
    probes: Sequence[Sequence[Probe]],
    options: RunOptions,
) -> List[ResponseSet]:
    """
    Run independent impulse responses side by side.

    Each batch member stops at the first check where all of its own
    channels have decayed, and its static levels are taken from the
    window ending there. A member's result therefore does not depend on
    which other sources share its batch.

    Args:
        mask: Rasterized geometry
        polarization: Field set to simulate
        sources: One pulse per batch member
        probes: Probes read in each batch member
        options: Conductivity, time step and stopping rule

    Returns:
        One ResponseSet per source, each as long as its own decay time

    Raises:
        NonDecayingRunError: If some member's tail criterion is unmet at max_steps
    """
    polarization = Polarization(polarization)
    if len(sources) != len(probes):
        raise GeometryError("every source needs its own probe list")
    for source in sources:
        source.validate(mask, polarization)

    cells = mask.cells
    solver = make_solver(polarization, mask, options.sigma, options.courant, batch=len(sources))
    recorder = _Recorder(probes, cells, options.max_steps)
    magnetic = np.array([field_type_of(p.component) == FieldType.MAGNETIC for _, p in recorder.channels], dtype=bool)
    owner = np.array([b for b, _ in recorder.channels], dtype=int)
    J, K = _pulse(sources, cells, solver.dt)

    stops = np.zeros(len(sources), dtype=int)
    levels = np.zeros(len(recorder.channels))
    member_ratio = np.full(len(sources), np.inf)
    n = 0
    for n in range(1, options.max_steps + 1):
        if n == 1:
            solver.step(J=J, K=K)
        else:
            solver.step()
        recorder.record(solver.fields, n - 1)

        if n % CHECK_EVERY == 0 and n >= MIN_STEPS:
            if logger.isEnabledFor(logging.DEBUG):
                assert solver.state.pec_violation() == 0.0
            static = _static_estimate(recorder.data, n, magnetic)
            if not options.remove_static:
                static = np.zeros_like(static)
            member_ratio = np.zeros(len(sources))
            np.maximum.at(member_ratio, owner, _tail_ratios(recorder.data, n, static))
            done = (stops == 0) & (member_ratio <= options.tail_tol)
            stops[done] = n
            settled = done[owner]
            levels[settled] = static[settled]
            if stops.all():
                break
    else:
        raise NonDecayingRunError(options.max_steps, float(member_ratio[stops == 0].max()))

    n = int(stops.max())
    if n > 0.8 * options.max_steps:
        logger.warning(f"run needed {n} of {options.max_steps} steps")
    logger.debug(f"{len(sources)} {polarization.value} sources decayed after {stops.min()}-{n} steps")

    results = [ResponseSet(source=s, dt=solver.dt, series={}) for s in sources]
    for ch, (b, probe) in enumerate(recorder.channels):
        key = (tuple(probe.position), probe.component)
        level = float(levels[ch])
        results[b].series[key] = recorder.data[ch, : stops[b]] - level
        if magnetic[ch]:
            results[b].static_levels[key] = level

    if options.dump_dir is not None:
        for b, response in enumerate(results):
            dump_responses(response, Path(options.dump_dir) / f"{polarization.value}_{sources[b].component}_{b:04d}.csv")
    return results


def run_dipole_response(
    mask: PECMask,
    polarization: Polarization,
    source: DipoleSource,
    probes: StressSurface,
    options: RunOptions,
    probe_components: Optional[Sequence[str]] = None,
) -> ResponseSet:
    """Response of every surface point to one source (probe components default to the source's)."""
    names = probe_components or (source.component,)
    group = [Probe(position=p.position, component=c) for p in probes.points for c in names]
    return run_batch(mask, polarization, [source], [group], options)[0]


def self_response(
    mask: PECMask,
    polarization: Polarization,
    point: Tuple[float, ...],
    component: str,
    options: RunOptions,
) -> np.ndarray:
    """Field `component` at `point` due to a unit pulse of the same component there."""
    source = DipoleSource(position=tuple(point), component=component)
    response = run_batch(mask, polarization, [source], [[Probe(tuple(point), component)]], options)[0]
    return response[(tuple(point), component)]


def modified_energy(
    mask: PECMask,
    polarization: Polarization,
    source: DipoleSource,
    sigma: float,
    n_steps: int,
    courant: float = 0.5,
) -> np.ndarray:
    """
    Leapfrog energy |E^n|^2 + H^{n-1/2}.H^{n+1/2} after a pulse.

    Conserved with sigma = 0 and non-increasing with sigma > 0 once the
    pulse has been applied.
    """
    solver = make_solver(polarization, mask, sigma, courant, batch=1, track_energy=True)
    J, K = _pulse([source], mask.cells, solver.dt)
    solver.step(J=J, K=K)
    for _ in range(n_steps):
        solver.step()
    return np.asarray([e[0] for e in solver.energy_history[1:]])


def dump_responses(response: ResponseSet, path: Path) -> Path:
    """CSV with columns step, probe, value."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frames = []
    for k, (key, series) in enumerate(response.series.items()):
        frames.append(pd.DataFrame({"step": np.arange(series.size), "probe": k, "value": series}))
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    logger.debug(f"dumped responses to {path}")
    return path
