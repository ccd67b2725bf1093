"""
Geometry model: perfect-conductor layouts and their stress surfaces.

Layouts are lists of axis-aligned cell rectangles inside a domain whose
outer boundary is itself a perfect conductor.
"""

import logging
import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..errors import GeometryError

logger = logging.getLogger(__name__)

MIN_GAP = 4
# Without sidewalls the blocks sit this many block sizes from the outer
# boundary along y.
FREE_SPACE_FACTOR = 4


class GeometryKind(str, Enum):
    """Supported layouts."""
    PARALLEL_PLATES_1D = "parallel_plates_1d"
    PISTON_2D = "piston_2d"
    CUSTOM_RECTANGLES_2D = "custom_rectangles_2d"


class Block(BaseModel):
    """Cell rectangle [x0, x1) x [y0, y1); 1D blocks ignore y."""

    model_config = ConfigDict(frozen=True)

    x0: int
    x1: int
    y0: int = 0
    y1: int = 1

    def overlaps(self, other: "Block") -> bool:
        return (
            self.x0 < other.x1 and other.x0 < self.x1
            and self.y0 < other.y1 and other.y0 < self.y1
        )

    def mirrored(self, axis: int, extent: int) -> "Block":
        if axis == 0:
            return Block(x0=extent - self.x1, x1=extent - self.x0, y0=self.y0, y1=self.y1)
        return Block(x0=self.x0, x1=self.x1, y0=extent - self.y1, y1=extent - self.y0)


class SurfacePoint(BaseModel):
    """One quadrature point of a stress surface."""

    model_config = ConfigDict(frozen=True)

    position: Tuple[float, ...]
    normal_axis: int
    normal_sign: int = Field(..., description="+1 or -1, outward from the body")
    element: float = 1.0


class StressSurface(BaseModel):
    """
    Closed surface around one body.

    Traversal order is fixed: 1D lists the inner (gap) point then the outer
    one; 2D walks the rectangle counter-clockwise starting at the bottom
    edge. Force accumulation always follows this order.
    """

    model_config = ConfigDict(frozen=True)

    points: Tuple[SurfacePoint, ...]
    body: int

    def __len__(self) -> int:
        return len(self.points)


class Geometry(BaseModel):
    """Validated conductor layout plus its stress surface."""

    model_config = ConfigDict(frozen=True)

    kind: GeometryKind
    cells: Tuple[int, ...]
    blocks: Tuple[Block, ...] = ()
    body: Optional[int] = None
    surface_offset: int = 2
    a: Optional[int] = None
    s: Optional[int] = None
    d: Optional[float] = None
    pad: Optional[int] = None
    wall_thickness: Optional[int] = None
    free_clearance: Optional[int] = None

    @property
    def ndim(self) -> int:
        return len(self.cells)

    @property
    def has_sidewalls(self) -> bool:
        return self.kind == GeometryKind.PISTON_2D and self.d is not None and math.isfinite(self.d)

    def validate_layout(self) -> None:
        """Blocks inside the domain and pairwise disjoint."""
        for k, block in enumerate(self.blocks):
            if block.x0 < 0 or block.x1 > self.cells[0] or block.x0 >= block.x1:
                raise GeometryError(f"block {k} outside the domain or empty: {block}")
            if self.ndim == 2 and (block.y0 < 0 or block.y1 > self.cells[1] or block.y0 >= block.y1):
                raise GeometryError(f"block {k} outside the domain or empty: {block}")
        for i in range(len(self.blocks)):
            for j in range(i + 1, len(self.blocks)):
                if self.blocks[i].overlaps(self.blocks[j]):
                    raise GeometryError(f"blocks {i} and {j} overlap")
        if self.body is not None and not 0 <= self.body < len(self.blocks):
            raise GeometryError(f"body index {self.body} out of range")

    def stress_surface(self, body: Optional[int] = None) -> StressSurface:
        """
        Stress surface around `body` (defaults to the geometry's body).

        Raises:
            GeometryError: If the geometry has no body to enclose
        """
        body = self.body if body is None else body
        if body is None:
            raise GeometryError("geometry has no body to enclose")
        if self.ndim == 1:
            return _plate_surface(self, body)
        return _rectangle_surface(self.blocks[body], self.surface_offset, body)

    def mirrored(self, axis: int = 0) -> "Geometry":
        """Reflection of the layout across the domain midline of `axis`."""
        if axis >= self.ndim:
            raise GeometryError(f"cannot mirror a {self.ndim}D geometry along axis {axis}")
        blocks = tuple(b.mirrored(axis, self.cells[axis]) for b in self.blocks)
        return self.model_copy(update={"blocks": blocks})


def _plate_surface(geometry: Geometry, body: int) -> StressSurface:
    plate = geometry.blocks[body]
    others = [b for k, b in enumerate(geometry.blocks) if k != body]
    left = max((b.x1 for b in others if b.x1 <= plate.x0), default=0)
    right = min((b.x0 for b in others if b.x0 >= plate.x1), default=geometry.cells[0])

    left_mid = 0.5 * (left + plate.x0)
    right_mid = 0.5 * (plate.x1 + right)
    # The inner point faces the other plate; outer walls touch the domain edge.
    interior = [b for b in others if b.x0 > 0 and b.x1 < geometry.cells[0]]
    gap_on_left = any(b.x1 <= plate.x0 for b in interior)
    inner = SurfacePoint(position=(left_mid,), normal_axis=0, normal_sign=-1)
    outer = SurfacePoint(position=(right_mid,), normal_axis=0, normal_sign=1)
    if not gap_on_left:
        inner = SurfacePoint(position=(right_mid,), normal_axis=0, normal_sign=1)
        outer = SurfacePoint(position=(left_mid,), normal_axis=0, normal_sign=-1)
    return StressSurface(points=(inner, outer), body=body)


def _rectangle_surface(block: Block, offset: int, body: int) -> StressSurface:
    x0, x1 = block.x0 - offset, block.x1 + offset
    y0, y1 = block.y0 - offset, block.y1 + offset
    points: List[SurfacePoint] = []
    for x in range(x0, x1):
        points.append(SurfacePoint(position=(x + 0.5, float(y0)), normal_axis=1, normal_sign=-1))
    for y in range(y0, y1):
        points.append(SurfacePoint(position=(float(x1), y + 0.5), normal_axis=0, normal_sign=1))
    for x in reversed(range(x0, x1)):
        points.append(SurfacePoint(position=(x + 0.5, float(y1)), normal_axis=1, normal_sign=1))
    for y in reversed(range(y0, y1)):
        points.append(SurfacePoint(position=(float(x0), y + 0.5), normal_axis=0, normal_sign=-1))
    return StressSurface(points=tuple(points), body=body)


def build_parallel_plates_1d(a: int, wall_thickness: int = 2, pad: int = 20) -> Geometry:
    """
    1D layout [outer wall | pad | plate | gap a | plate | pad | outer wall].

    Outer walls are one cell thick, so the domain has a + 2*wall + 2*pad + 2
    cells. The body is the right plate; its surface is the gap midpoint and
    the midpoint of the right outer pad.

    Args:
        a: Gap between the plates in cells
        wall_thickness: Plate thickness in cells
        pad: Vacuum between each plate and the outer wall

    Returns:
        Validated Geometry
    """
    if a < MIN_GAP:
        raise GeometryError(f"gap under-resolved: a={a} < {MIN_GAP}")
    if wall_thickness < 2:
        raise GeometryError(f"plate thickness {wall_thickness} < 2 cells")
    if pad < 4:
        raise GeometryError(f"pad {pad} < 4 cells")

    n = a + 2 * wall_thickness + 2 * pad + 2
    left_plate = Block(x0=1 + pad, x1=1 + pad + wall_thickness)
    right_plate = Block(x0=left_plate.x1 + a, x1=left_plate.x1 + a + wall_thickness)
    blocks = (Block(x0=0, x1=1), left_plate, right_plate, Block(x0=n - 1, x1=n))

    geometry = Geometry(
        kind=GeometryKind.PARALLEL_PLATES_1D,
        cells=(n,),
        blocks=blocks,
        body=2,
        a=a,
        pad=pad,
        wall_thickness=wall_thickness,
    )
    geometry.validate_layout()
    logger.debug(f"1D plates: a={a}, domain={n} cells, plates at {left_plate.x0} and {right_plate.x0}")
    return geometry


def build_piston_2d(
    s: int,
    a: int,
    d: Optional[float] = None,
    pad: int = 16,
    wall_thickness: int = 2,
    free_clearance: Optional[int] = None,
) -> Geometry:
    """
    Two s x s blocks with surface gap a along x, centred between two
    sidewalls at inner separation d along y.

    Without sidewalls the only conductor along y is the outer boundary,
    placed `free_clearance` cells from the blocks (default
    FREE_SPACE_FACTOR * max(s, a)), far beyond any swept sidewall
    separation.

    Args:
        s: Block side in cells
        a: Block-block gap in cells
        d: Sidewall separation in cells, or None / inf for no sidewalls
        pad: Vacuum beyond the blocks along x
        wall_thickness: Sidewall thickness in cells
        free_clearance: Block-boundary distance along y without sidewalls

    Returns:
        Validated Geometry whose body is the left block
    """
    if s < 8:
        raise GeometryError(f"block side {s} < 8 cells")
    if a < MIN_GAP:
        raise GeometryError(f"gap under-resolved: a={a} < {MIN_GAP}")
    if pad < 4:
        raise GeometryError(f"pad {pad} < 4 cells")

    nx = 2 * pad + 2 * s + a
    blocks: List[Block] = []
    sidewalls = d is not None and math.isfinite(d)

    if sidewalls:
        if abs(d - round(d)) > 1e-9:
            raise GeometryError(f"sidewall separation must be a whole number of cells, got {d}")
        d_cells = int(round(d))
        if d_cells < s + 4:
            raise GeometryError(
                f"insufficient sidewall clearance: d={d_cells} < s + 4 = {s + 4}"
            )
        ny = d_cells + 2 * wall_thickness
        clearance = (d_cells - s) // 2
        y0 = wall_thickness + clearance
        offset = max(1, min(2, clearance // 2))
    else:
        if free_clearance is None:
            free_clearance = FREE_SPACE_FACTOR * max(s, a)
        if free_clearance < pad:
            raise GeometryError(f"free clearance {free_clearance} below pad {pad}")
        ny = 2 * free_clearance + s
        y0 = free_clearance
        offset = 2
        d = math.inf

    block_a = Block(x0=pad, x1=pad + s, y0=y0, y1=y0 + s)
    block_b = Block(x0=pad + s + a, x1=pad + 2 * s + a, y0=y0, y1=y0 + s)
    blocks.extend([block_a, block_b])
    if sidewalls:
        blocks.append(Block(x0=0, x1=nx, y0=0, y1=wall_thickness))
        blocks.append(Block(x0=0, x1=nx, y0=ny - wall_thickness, y1=ny))

    geometry = Geometry(
        kind=GeometryKind.PISTON_2D,
        cells=(nx, ny),
        blocks=tuple(blocks),
        body=0,
        surface_offset=offset,
        a=a,
        s=s,
        d=float(d),
        pad=pad,
        wall_thickness=wall_thickness,
        free_clearance=None if sidewalls else free_clearance,
    )
    geometry.validate_layout()
    logger.debug(f"piston: s={s}, a={a}, d={d}, domain={nx}x{ny}, surface offset {offset}")
    return geometry


def build_custom_rectangles_2d(
    cells: Tuple[int, int],
    blocks: List[Block],
    body: Optional[int] = None,
    surface_offset: int = 2,
) -> Geometry:
    """Arbitrary rectangles; used for isolated-body and symmetry checks."""
    geometry = Geometry(
        kind=GeometryKind.CUSTOM_RECTANGLES_2D,
        cells=tuple(cells),
        blocks=tuple(blocks),
        body=body,
        surface_offset=surface_offset,
    )
    geometry.validate_layout()
    return geometry


def empty_domain(cells: Tuple[int, ...]) -> Geometry:
    """Vacuum box (only the outer boundary conducts)."""
    kind = GeometryKind.PARALLEL_PLATES_1D if len(cells) == 1 else GeometryKind.CUSTOM_RECTANGLES_2D
    return Geometry(kind=kind, cells=tuple(cells))


def scale_geometry(geometry: Geometry, resolution: int) -> Geometry:
    """Rebuild a plate or piston layout with every length multiplied by `resolution`."""
    if resolution == 1:
        return geometry
    if geometry.kind == GeometryKind.PARALLEL_PLATES_1D:
        return build_parallel_plates_1d(
            geometry.a * resolution, geometry.wall_thickness * resolution, geometry.pad * resolution
        )
    if geometry.kind == GeometryKind.PISTON_2D:
        d = geometry.d * resolution if geometry.has_sidewalls else None
        clearance = geometry.free_clearance * resolution if geometry.free_clearance else None
        return build_piston_2d(
            geometry.s * resolution, geometry.a * resolution, d,
            geometry.pad * resolution, geometry.wall_thickness * resolution, clearance,
        )
    raise GeometryError(f"resolution scaling not defined for {geometry.kind.value}")
