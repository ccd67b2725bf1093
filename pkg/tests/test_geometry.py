import math

import numpy as np
import pytest

from core.errors import GeometryError
from core.model.geometry import (
    Block,
    GeometryKind,
    build_custom_rectangles_2d,
    build_parallel_plates_1d,
    build_piston_2d,
    empty_domain,
    scale_geometry,
)
from core.model.mask import check_surface, rasterize
from core.model.staggering import (
    Polarization,
    all_components,
    component_shape,
    interpolation_stencil,
)


class TestParallelPlates:
    def test_layout_arithmetic(self):
        geometry = build_parallel_plates_1d(40, wall_thickness=2, pad=20)
        assert geometry.cells == (86,)
        plates = [b for b in geometry.blocks if b.x1 - b.x0 == 2]
        assert [(b.x0, b.x1) for b in plates] == [(21, 23), (63, 65)]
        assert geometry.blocks[geometry.body].x0 == 63

    def test_stress_points(self):
        surface = build_parallel_plates_1d(40, wall_thickness=2, pad=20).stress_surface()
        inner, outer = surface.points
        assert inner.position == (43.0,)
        assert inner.normal_sign == -1
        assert outer.position == (75.0,)
        assert outer.normal_sign == 1

    def test_gap_under_resolved(self):
        with pytest.raises(GeometryError, match="gap under-resolved"):
            build_parallel_plates_1d(3, wall_thickness=2, pad=20)

    def test_thin_plate_rejected(self):
        with pytest.raises(GeometryError):
            build_parallel_plates_1d(40, wall_thickness=1)


class TestPiston:
    def test_sidewall_clearance(self):
        geometry = build_piston_2d(s=16, a=16, d=48, pad=16)
        block = geometry.blocks[0]
        wall_low, wall_high = geometry.blocks[2], geometry.blocks[3]
        assert block.y0 - wall_low.y1 == 16
        assert wall_high.y0 - block.y1 == 16

    def test_insufficient_clearance(self):
        with pytest.raises(GeometryError, match="insufficient sidewall clearance"):
            build_piston_2d(s=16, a=16, d=18, pad=16)

    def test_no_sidewalls(self):
        open_piston = build_piston_2d(s=16, a=16, d=None, pad=16)
        assert not open_piston.has_sidewalls
        assert len(open_piston.blocks) == 2
        assert math.isinf(open_piston.d)
        assert build_piston_2d(s=16, a=16, d=math.inf, pad=16).blocks == open_piston.blocks

    def test_free_piston_is_far_from_boundary(self):
        geometry = build_piston_2d(s=16, a=16, d=None, pad=16)
        block = geometry.blocks[0]
        assert geometry.free_clearance == 64
        assert block.y0 == 64 and geometry.cells[1] - block.y1 == 64
        assert geometry.cells[0] == 2 * 16 + 2 * 16 + 16

    def test_free_piston_differs_from_widest_sidewalls(self):
        # sidewalls at d = s + 2*pad used to stand in for d = inf
        free = build_piston_2d(s=16, a=16, d=None, pad=16)
        walled = build_piston_2d(s=16, a=16, d=48, pad=16)
        assert free.cells[1] > walled.cells[1] + 2 * 16
        assert rasterize(free).occupied_count < rasterize(walled).occupied_count

    def test_free_clearance_below_pad(self):
        with pytest.raises(GeometryError, match="free clearance"):
            build_piston_2d(s=8, a=4, d=None, pad=16, free_clearance=8)

    def test_scaled_free_piston(self):
        geometry = build_piston_2d(s=8, a=4, d=None, pad=4, free_clearance=12)
        assert scale_geometry(geometry, 2).free_clearance == 24

    def test_surface_is_counter_clockwise_rectangle(self):
        geometry = build_piston_2d(s=16, a=16, d=None, pad=16)
        surface = geometry.stress_surface()
        block = geometry.blocks[0]
        side = block.x1 - block.x0 + 2 * geometry.surface_offset
        assert len(surface) == 4 * side
        first = surface.points[0]
        assert first.normal_axis == 1 and first.normal_sign == -1
        assert first.position == (block.x0 - geometry.surface_offset + 0.5, float(block.y0 - geometry.surface_offset))
        # second edge is the right side, outward +x
        assert surface.points[side].normal_axis == 0 and surface.points[side].normal_sign == 1

    def test_surface_clear_of_conductors(self):
        for d in (20, 24, 48, None):
            geometry = build_piston_2d(s=16, a=16, d=d, pad=16)
            check_surface(geometry.stress_surface(), rasterize(geometry))

    def test_narrow_sidewall_surface_clearance(self):
        narrow = build_piston_2d(s=16, a=16, d=20, pad=16)
        assert narrow.surface_offset == 1
        check_surface(narrow.stress_surface(), rasterize(narrow))
        with pytest.raises(GeometryError, match="within 2"):
            check_surface(narrow.stress_surface(), rasterize(narrow), clearance=2.0)
        wide = build_piston_2d(s=16, a=16, d=48, pad=16)
        check_surface(wide.stress_surface(), rasterize(wide), clearance=2.0)

    def test_scale_geometry(self):
        geometry = build_piston_2d(s=8, a=4, d=12, pad=4)
        doubled = scale_geometry(geometry, 2)
        assert doubled.cells == (2 * geometry.cells[0], 2 * geometry.cells[1])
        assert doubled.a == 8 and doubled.d == 24.0


class TestMask:
    def test_empty_geometry_is_vacuum(self):
        mask = rasterize(empty_domain((12, 10)))
        assert mask.occupied_count == 0
        # only the outer boundary holds tangential E
        assert mask.electric["ez"][1:-1, 1:-1].sum() == 0
        assert mask.electric["ez"][0, :].all() and mask.electric["ez"][:, -1].all()

    def test_single_block_faces(self):
        geometry = build_custom_rectangles_2d((10, 10), [Block(x0=4, x1=6, y0=4, y1=6)], body=0)
        mask = rasterize(geometry)
        ez = mask.electric["ez"]
        assert ez[4:7, 4:7].all()
        assert ez[1:-1, 1:-1].sum() == 9
        ex = mask.electric["ex"]
        # E_x sits on horizontal faces: rows y = 4, 5, 6 over cells x = 4, 5
        assert ex[4:6, 4:7].all()
        assert ex[:, 1:-1].sum() == 6
        ey = mask.electric["ey"]
        assert ey[4:7, 4:6].all()
        assert ey[1:-1, :].sum() == 6

    def test_piston_occupied_count(self):
        geometry = build_piston_2d(s=16, a=16, d=48, pad=16)
        mask = rasterize(geometry)
        nx = geometry.cells[0]
        assert mask.occupied_count == 2 * 16 * 16 + 2 * nx * geometry.wall_thickness

    def test_mask_shapes_match_components(self, piston_small):
        mask = rasterize(piston_small)
        for name, m in mask.electric.items():
            assert m.shape == component_shape(name, piston_small.cells)

    def test_distance_to_conductor(self):
        mask = rasterize(build_parallel_plates_1d(8, wall_thickness=2, pad=6))
        # gap spans [9, 17)
        assert mask.distance_to_conductor((13.0,)) == pytest.approx(4.0)
        assert not mask.is_vacuum((9.5,), clearance=1.0)


class TestStaggering:
    def test_components(self):
        assert all_components(Polarization.TM) == ("ez", "hx", "hy")
        assert all_components(Polarization.TE) == ("ex", "ey", "hz")
        assert all_components(Polarization.SCALAR_1D) == ("ey", "hz")

    def test_stencil_on_lattice(self):
        assert interpolation_stencil("ez", (3.0, 4.0), (10, 10)) == (((3, 4), 1.0),)

    def test_stencil_between_samples(self):
        stencil = interpolation_stencil("hz", (3.0, 4.5), (10, 10))
        assert sorted(stencil) == [((2, 4), 0.5), ((3, 4), 0.5)]
        assert sum(w for _, w in stencil) == pytest.approx(1.0)

    def test_stencil_outside_domain(self):
        with pytest.raises(ValueError):
            interpolation_stencil("ez", (11.0, 4.0), (10, 10))
