"""
Sub-command implementations: run, weights, reference.

Forces in result tables are dimensionless, F * a^2 in 1D and F * a^3 in 2D
with a the gap in cells at the point's resolution, so rows at different
resolutions compare directly. The `sigma` column holds sigma * a.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Tuple

from core.errors import CasimirError
from core.model.specs import TemperatureSpec
from core.reference.oracle import reference_series
from core.weights.spectrum import build_spectrum, magnetic_variant
from core.weights.synthesis import augment_zero_mode, synthesize_time_weight, window_contour

from worker import SweepWorker

from .config import RunConfig
from .evaluate import PointEvaluator, point_fields
from .output import (
    FAILURE_MARKER,
    REFERENCE_COLUMNS,
    RESULT_COLUMNS,
    SPECTRUM_COLUMNS,
    TIME_WEIGHT_COLUMNS,
    failure_row,
    write_table,
)

logger = logging.getLogger(__name__)

# Weight tables cover this many damping times 1/sigma.
WEIGHT_WINDOW_DAMPING_TIMES = 20.0


def cmd_run(config: RunConfig, jobs: int = 1, timestamp: bool = True, debug_dumps: bool = False) -> int:
    """
    Evaluate every sweep point and write the result table.

    Returns:
        0 on success, 2 when any point failed (its failure marker row is
        written in place of its results)
    """
    dump_dir = None
    if debug_dumps or config.outputs.dump_dir:
        dump_dir = Path(config.outputs.dump_dir or "dumps")

    outcomes = SweepWorker(config, jobs=jobs, dump_dir=dump_dir).run()
    rows: List[Dict[str, object]] = []
    failed = 0
    for point, outcome in outcomes:
        if isinstance(outcome, BaseException):
            failed += 1
            rows.append(failure_row(point_fields(point), outcome))
        else:
            rows.extend(outcome)

    write_table(rows, RESULT_COLUMNS, Path(config.outputs.path), timestamp)
    if failed:
        logger.error(f"{failed} of {len(outcomes)} sweep points failed; see '{FAILURE_MARKER}' rows")
        return 2
    return 0


def weight_tables(config: RunConfig) -> Tuple[List[Dict[str, object]], List[Dict[str, object]]]:
    """Spectrum and time-weight rows for every (tau, sigma) of the first gap."""
    a_cells = config.geometry.a[0] * config.numerics.resolution[0]
    dt = config.numerics.courant
    spectrum_rows: List[Dict[str, object]] = []
    time_rows: List[Dict[str, object]] = []
    for tau in config.physics.tau:
        temperature = TemperatureSpec(tau=tau, a=a_cells)
        for sigma, sigma_a in config.physics.sigma_values(a_cells):
            n_steps = int(math.ceil(WEIGHT_WINDOW_DAMPING_TIMES / (max(sigma, 1e-12) * dt)))
            n_steps = min(n_steps, config.numerics.max_steps)
            contour = window_contour(sigma, dt, n_steps)
            electric = build_spectrum(contour, temperature)
            for spectrum in (electric, magnetic_variant(electric)):
                g = augment_zero_mode(
                    synthesize_time_weight(spectrum, dt, n_steps, config.numerics.taper_fraction),
                    contour,
                    temperature,
                )
                variant = spectrum.variant.value
                spectrum_rows.extend(
                    {"tau": tau, "sigma": sigma_a, "variant": variant, "xi": x, "re_g": v.real, "im_g": v.imag}
                    for x, v in zip(spectrum.xi_samples, spectrum.values)
                )
                time_rows.extend(
                    {"tau": tau, "sigma": sigma_a, "variant": variant, "t": t, "g": v, "zero_mode_constant": g.zero_mode_constant}
                    for t, v in zip(g.times, g.values)
                )
    return spectrum_rows, time_rows


def cmd_weights(config: RunConfig, timestamp: bool = True) -> int:
    spectrum_rows, time_rows = weight_tables(config)
    base = Path(config.outputs.weights_path)
    write_table(spectrum_rows, SPECTRUM_COLUMNS, base.with_suffix(".spectrum.csv"), timestamp)
    write_table(time_rows, TIME_WEIGHT_COLUMNS, base.with_suffix(".time.csv"), timestamp)
    return 0


def cmd_reference(config: RunConfig, timestamp: bool = True) -> int:
    """Matsubara series table of the grid oracle for every tau > 0 sweep point."""
    rows: List[Dict[str, object]] = []
    status = 0
    for point in config.sweep_points():
        if point.tau == 0.0:
            logger.warning(f"a={point.a}, d={point.d}: no Matsubara series at tau = 0")
            continue
        try:
            evaluator = PointEvaluator(config, point)
            for pol in config.polarizations:
                series = reference_series(evaluator.mask, evaluator.temperature, pol, evaluator.surface)
                partial = series.partial_sums() * evaluator.norm
                for (n, xi, f), s in zip(series.terms, partial):
                    rows.append(
                        {"a": point.a, "d": point.d, "tau": point.tau, "polarization": pol.value,
                         "n": n, "xi_n": xi, "f": f, "partial_sum": s}
                    )
        except CasimirError as e:
            logger.error(f"reference series failed for {point_fields(point)}: {e}", exc_info=True)
            status = 2
    write_table(rows, REFERENCE_COLUMNS, Path(config.outputs.reference_path), timestamp)
    return status
