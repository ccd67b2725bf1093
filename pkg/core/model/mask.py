"""
Rasterization of a geometry onto the staggered grid.

A cell is occupied when it belongs to a block. A tangential E sample is
held at zero when it lies on the domain boundary or touches an occupied
cell; H samples are never masked.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..errors import GeometryError
from .geometry import Geometry, StressSurface
from .staggering import component_shape


@dataclass
class PECMask:
    """Occupancy plus one boolean mask per electric component (True = conductor)."""

    occupancy: np.ndarray
    electric: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def cells(self) -> Tuple[int, ...]:
        return self.occupancy.shape

    @property
    def occupied_count(self) -> int:
        return int(self.occupancy.sum())

    def distance_to_conductor(self, position: Tuple[float, ...]) -> float:
        """Distance (cells, Chebyshev) from a point to the nearest conductor or wall."""
        distance = np.inf
        for x, n in zip(position, self.cells):
            distance = min(distance, x, n - x)
        occupied = np.argwhere(self.occupancy)
        if occupied.size:
            pos = np.asarray(position)
            lo = occupied
            hi = occupied + 1
            gap = np.maximum(np.maximum(lo - pos, pos - hi), 0.0)
            distance = min(distance, float(gap.max(axis=1).min()))
        return float(distance)

    def is_vacuum(self, position: Tuple[float, ...], clearance: float = 1.0) -> bool:
        return self.distance_to_conductor(position) >= clearance


def _mask_1d(occ: np.ndarray) -> np.ndarray:
    n = occ.size
    mask = np.zeros(n + 1, dtype=bool)
    mask[0] = mask[-1] = True
    mask[1:-1] = occ[:-1] | occ[1:]
    return mask


def _mask_ez(occ: np.ndarray) -> np.ndarray:
    nx, ny = occ.shape
    padded = np.zeros((nx + 2, ny + 2), dtype=bool)
    padded[1:-1, 1:-1] = occ
    # Node (i, j) touches cells (i-1..i, j-1..j).
    mask = padded[:-1, :-1] | padded[1:, :-1] | padded[:-1, 1:] | padded[1:, 1:]
    mask[0, :] = mask[-1, :] = True
    mask[:, 0] = mask[:, -1] = True
    return mask


def _mask_ex(occ: np.ndarray) -> np.ndarray:
    nx, ny = occ.shape
    padded = np.zeros((nx, ny + 2), dtype=bool)
    padded[:, 1:-1] = occ
    mask = padded[:, :-1] | padded[:, 1:]
    mask[:, 0] = mask[:, -1] = True
    return mask


def _mask_ey(occ: np.ndarray) -> np.ndarray:
    nx, ny = occ.shape
    padded = np.zeros((nx + 2, ny), dtype=bool)
    padded[1:-1, :] = occ
    mask = padded[:-1, :] | padded[1:, :]
    mask[0, :] = mask[-1, :] = True
    return mask


def rasterize(geometry: Geometry) -> PECMask:
    """
    Occupancy grid and the masks of every electric component of the
    geometry's dimension (E_y in 1D; E_z, E_x, E_y in 2D).

    Args:
        geometry: Validated layout

    Returns:
        PECMask whose electric arrays match the component shapes
    """
    occ = np.zeros(geometry.cells, dtype=bool)
    for block in geometry.blocks:
        if geometry.ndim == 1:
            occ[block.x0:block.x1] = True
        else:
            occ[block.x0:block.x1, block.y0:block.y1] = True

    masks: Dict[str, np.ndarray] = {}
    if geometry.ndim == 1:
        masks["ey"] = _mask_1d(occ)
    else:
        masks["ez"] = _mask_ez(occ)
        masks["ex"] = _mask_ex(occ)
        masks["ey"] = _mask_ey(occ)

    for name, mask in masks.items():
        assert mask.shape == component_shape(name, geometry.cells), name
    return PECMask(occupancy=occ, electric=masks)


def check_surface(surface: StressSurface, mask: PECMask, clearance: float = 1.0) -> None:
    """
    Every stress point must sit in vacuum at least `clearance` cells from
    any conductor.

    The default is one cell, not two. The narrowest piston layout
    (d = s + 4) leaves two cells between block and sidewall, so its
    surface runs one cell from each; wider layouts use a two-cell offset
    and pass a stricter check as well.

    Raises:
        GeometryError: On the first point that is too close
    """
    for k, point in enumerate(surface.points):
        if not mask.is_vacuum(point.position, clearance):
            raise GeometryError(
                f"stress point {k} at {point.position} is within {clearance} cell of a conductor"
            )
