"""
Sweep worker.

Evaluates every sweep point of a run configuration, serially or on a
process pool. Each point is independent and deterministic, so the pool
only changes wall time: outcomes come back in canonical sweep order
whatever the job count.
"""

import logging
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from app.evaluate import evaluate_point
from app.config import RunConfig, SweepPoint

logger = logging.getLogger(__name__)

Outcome = Union[List[Dict[str, object]], BaseException]


def process_point(job: Tuple[RunConfig, SweepPoint, Optional[Path]]) -> Tuple[SweepPoint, Outcome]:
    """
    Top-level job function so the pool can pickle it.

    Failures are returned rather than raised, one failed point must not
    cancel the rest of the sweep.
    """
    config, point, dump_dir = job
    try:
        return point, evaluate_point(config, point, dump_dir)
    except Exception as e:
        logger.error(f"sweep point {point.sort_key()} failed: {e}", exc_info=True)
        return point, e


class SweepWorker:
    """Run the sweep points of one configuration."""

    def __init__(self, config: RunConfig, jobs: int = 1, dump_dir: Optional[Path] = None):
        """
        Initialize the worker.

        Args:
            config: Validated run configuration
            jobs: Worker processes; 1 runs in-process
            dump_dir: Directory for per-point debug dumps
        """
        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        self.config = config
        self.jobs = jobs
        self.dump_dir = dump_dir

    def run(self) -> List[Tuple[SweepPoint, Outcome]]:
        points = self.config.sweep_points()
        jobs = [(self.config, point, self.dump_dir) for point in points]
        logger.info(f"running {len(points)} sweep points on {min(self.jobs, max(len(points), 1))} worker(s)")

        if self.jobs > 1 and len(points) > 1:
            with Pool(min(self.jobs, len(points))) as pool:
                outcomes = pool.map(process_point, jobs)
        else:
            outcomes = [process_point(job) for job in jobs]

        failed = sum(isinstance(outcome, BaseException) for _, outcome in outcomes)
        logger.info(f"sweep complete: {len(outcomes) - failed} ok, {failed} failed")
        return outcomes
