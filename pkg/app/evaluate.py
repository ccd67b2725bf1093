"""
Evaluation of a single sweep point.

Builds the point's geometry once and runs each requested method on it;
the time-domain traces are shared between the time-domain and naive
control methods.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

from core.force.integrate import ForceResult, force_from_traces, force_naive_from_traces
from core.model.geometry import Geometry, GeometryKind, build_parallel_plates_1d, build_piston_2d
from core.model.mask import PECMask, check_surface, rasterize
from core.model.specs import TemperatureSpec
from core.fdtd.run import RunOptions
from core.reference.lifshitz import lifshitz_1d_cavity
from core.reference.oracle import force_matsubara_grid
from core.stress.trace import StressTrace, assemble_stress_trace, dump_trace

from .config import Method, RunConfig, SweepPoint
from .output import result_row

logger = logging.getLogger(__name__)

METHOD_ORDER = [Method.TIMEDOMAIN, Method.REFERENCE, Method.LIFSHITZ, Method.NAIVE_CONTROL]


def build_geometry(config: RunConfig, point: SweepPoint) -> Geometry:
    """Geometry of a sweep point with every length scaled by its resolution."""
    res = point.resolution
    g = config.geometry
    if point.kind == GeometryKind.PARALLEL_PLATES_1D:
        return build_parallel_plates_1d(point.a * res, g.wall_thickness * res, g.effective_pad * res)
    d = None if math.isinf(point.d) else point.d * res
    clearance = None if g.free_clearance is None else g.free_clearance * res
    return build_piston_2d(g.s * res, point.a * res, d, g.effective_pad * res, g.wall_thickness * res, clearance)


def point_fields(point: SweepPoint) -> Dict[str, object]:
    return {
        "kind": point.kind.value,
        "a": point.a,
        "d": point.d,
        "tau": point.tau,
        "sigma": point.sigma_a,
        "resolution": point.resolution,
    }


class PointEvaluator:
    """Runs every requested method for one sweep point."""

    def __init__(self, config: RunConfig, point: SweepPoint, dump_dir: Optional[Path] = None):
        self.config = config
        self.point = point
        self.dump_dir = dump_dir
        self.geometry = build_geometry(config, point)
        self.mask: PECMask = rasterize(self.geometry)
        self.surface = self.geometry.stress_surface()
        check_surface(self.surface, self.mask)
        self.temperature = TemperatureSpec(tau=point.tau, a=point.a_cells)
        self.norm = float(point.a_cells) ** (self.geometry.ndim + 1)
        self._traces: Optional[List[StressTrace]] = None

    def label(self) -> str:
        p = self.point
        return f"a{p.a}_d{p.d:g}_tau{p.tau:g}_s{p.sigma_a:g}_r{p.resolution}"

    def traces(self) -> List[StressTrace]:
        if self._traces is None:
            numerics = self.config.numerics
            dump = self.dump_dir / self.label() if self.dump_dir else None
            options = RunOptions(
                sigma=self.point.sigma,
                courant=numerics.courant,
                max_steps=numerics.max_steps,
                tail_tol=numerics.tail_tol,
                dump_dir=dump,
            )
            self._traces = [
                assemble_stress_trace(self.mask, self.surface, pol, 0, options, batch_size=numerics.batch_size)
                for pol in self.config.polarizations
            ]
            if dump is not None:
                for trace in self._traces:
                    dump_trace(trace, dump / f"trace_{trace.polarization.value}.csv")
        return self._traces

    def timedomain(self) -> ForceResult:
        return force_from_traces(
            self.traces(), self.point.sigma, self.temperature, self.config.numerics.taper_fraction
        )

    def naive_control(self) -> ForceResult:
        return force_naive_from_traces(
            self.traces(),
            self.point.sigma,
            self.temperature,
            self.config.outputs.naive_zero_bin,
            self.config.numerics.taper_fraction,
        )

    def lifshitz(self) -> ForceResult:
        return lifshitz_1d_cavity(self.geometry, self.point.tau)

    def reference(self) -> ForceResult:
        return force_matsubara_grid(self.mask, self.temperature, self.config.polarizations, self.surface)

    def evaluate(self) -> List[Dict[str, object]]:
        """One row per requested method, in fixed method order."""
        requested = [m for m in METHOD_ORDER if m in self.config.outputs.methods]
        results: Dict[Method, ForceResult] = {}
        for method in requested:
            if method == Method.NAIVE_CONTROL and self.temperature.is_zero:
                logger.warning(f"{self.label()}: naive control skipped at tau = 0")
                continue
            logger.info(f"{self.label()}: {method.value}")
            results[method] = getattr(self, method.value)()

        oracle = results.get(Method.LIFSHITZ) or results.get(Method.REFERENCE)
        rows = []
        fields = point_fields(self.point)
        for method, result in results.items():
            rel_err = None
            if oracle is not None and method in (Method.TIMEDOMAIN, Method.NAIVE_CONTROL) and oracle.total != 0.0:
                rel_err = abs(result.total - oracle.total) / abs(oracle.total)
                if method == Method.TIMEDOMAIN and rel_err > 0.05:
                    logger.warning(f"{self.label()}: time-domain force deviates from the oracle by {rel_err:.1%}")
            scaled = result.scaled(self.norm)
            per_pol = {k: v.total for k, v in scaled.per_polarization.items()} if self.geometry.ndim == 2 else {}
            rows.append(
                result_row(method.value, fields, scaled.total, scaled.n0_part, scaled.npos_part, per_pol, rel_err)
            )
        return rows


def evaluate_point(config: RunConfig, point: SweepPoint, dump_dir: Optional[Path] = None) -> List[Dict[str, object]]:
    return PointEvaluator(config, point, dump_dir).evaluate()
