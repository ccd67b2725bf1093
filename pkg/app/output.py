"""
CSV tables.

Every table may start with one `# generated <timestamp>` line; readers
skip it as a comment. Rows keep the order they are given in.
"""

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence

import pandas as pd

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "method",
    "kind",
    "a",
    "d",
    "tau",
    "sigma",
    "resolution",
    "F_total",
    "F_n0",
    "F_npos",
    "F_TE",
    "F_TM",
    "oracle_rel_err",
]

SPECTRUM_COLUMNS = ["tau", "sigma", "variant", "xi", "re_g", "im_g"]
TIME_WEIGHT_COLUMNS = ["tau", "sigma", "variant", "t", "g", "zero_mode_constant"]
REFERENCE_COLUMNS = ["a", "d", "tau", "polarization", "n", "xi_n", "f", "partial_sum"]

FAILURE_MARKER = "FAILED"


def write_table(
    rows: Iterable[Dict[str, object]],
    columns: Sequence[str],
    path: Path,
    timestamp: bool = True,
) -> Path:
    """
    Write rows to CSV with a fixed column order.

    Args:
        rows: Row dicts; missing columns are left blank
        columns: Column order
        path: Output file
        timestamp: Prefix a `# generated` comment line

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(list(rows), columns=list(columns))
    with open(path, "w", newline="") as handle:
        if timestamp:
            handle.write(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
        frame.to_csv(handle, index=False, float_format="%.12g")
    logger.info(f"wrote {len(frame)} rows to {path}")
    return path


def read_table(path: Path, columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Read a table written by write_table, checking its columns when given."""
    frame = pd.read_csv(path, comment="#")
    if columns is not None and list(frame.columns) != list(columns):
        raise ValueError(f"{path}: columns {list(frame.columns)} != {list(columns)}")
    return frame


def failure_row(point: Dict[str, object], error: BaseException) -> Dict[str, object]:
    """Marker row for a sweep point that raised; forces stay blank."""
    row = {key: point.get(key) for key in ("kind", "a", "d", "tau", "sigma", "resolution")}
    row["method"] = FAILURE_MARKER
    logger.debug(f"failure marker for {row}: {error}")
    return row


def result_row(
    method: str,
    point: Dict[str, object],
    total: float,
    n0: float,
    npos: float,
    per_polarization: Dict[str, float],
    oracle_rel_err: Optional[float] = None,
) -> Dict[str, object]:
    row: Dict[str, object] = {key: point.get(key) for key in ("kind", "a", "d", "tau", "sigma", "resolution")}
    row.update(
        method=method,
        F_total=total,
        F_n0=n0,
        F_npos=npos,
        F_TE=per_polarization.get("te"),
        F_TM=per_polarization.get("tm"),
        oracle_rel_err=oracle_rel_err,
    )
    return row

