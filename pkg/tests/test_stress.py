import numpy as np
import pytest

from core.fdtd.run import RunOptions
from core.model.geometry import Block, SurfacePoint, build_custom_rectangles_2d
from core.model.mask import rasterize
from core.model.staggering import Polarization
from core.stress.trace import StressTrace, assemble_stress_trace, dump_trace, point_terms

OPTIONS = RunOptions(sigma=0.3, courant=0.5, max_steps=20000)


class TestPointTerms:
    def test_normal_direction_diagonal(self):
        point = SurfacePoint(position=(5.0, 2.5), normal_axis=0, normal_sign=1)
        assert point_terms(point, Polarization.TE, 0) == {
            ("ex", "ex"): 0.5,
            ("ey", "ey"): -0.5,
            ("hz", "hz"): -0.5,
        }

    def test_tangential_direction_off_diagonal(self):
        point = SurfacePoint(position=(2.5, 5.0), normal_axis=1, normal_sign=-1)
        assert point_terms(point, Polarization.TM, 0) == {("hy", "hx"): -0.5, ("hx", "hy"): -0.5}

    def test_one_dimensional(self):
        point = SurfacePoint(position=(4.0,), normal_axis=0, normal_sign=-1, element=2.0)
        assert point_terms(point, Polarization.SCALAR_1D, 0) == {("ey", "ey"): 1.0, ("hz", "hz"): 1.0}


class TestAssembly:
    def test_one_dimensional_plan(self, plates_small, plates_small_mask):
        trace = assemble_stress_trace(
            plates_small_mask, plates_small.stress_surface(), Polarization.SCALAR_1D, 0, OPTIONS
        )
        assert trace.n_simulations == 4
        assert trace.gamma_E.shape == trace.gamma_H.shape
        assert trace.dt == OPTIONS.courant
        assert np.all(np.isfinite(trace.total))

    def test_point_order_does_not_change_trace(self, plates_small, plates_small_mask):
        surface = plates_small.stress_surface()
        canonical = assemble_stress_trace(plates_small_mask, surface, Polarization.SCALAR_1D, 0, OPTIONS)
        reordered = assemble_stress_trace(
            plates_small_mask, surface, Polarization.SCALAR_1D, 0, OPTIONS, point_order=[1, 0]
        )
        np.testing.assert_array_equal(canonical.gamma_E, reordered.gamma_E)
        np.testing.assert_array_equal(canonical.gamma_H, reordered.gamma_H)
        assert canonical.static_H == reordered.static_H

    @pytest.mark.parametrize("polarization", [Polarization.TE, Polarization.TM])
    def test_batching_and_order_do_not_change_trace(self, piston_small, piston_small_mask, polarization):
        surface = piston_small.stress_surface()
        canonical = assemble_stress_trace(piston_small_mask, surface, polarization, 0, OPTIONS)
        reordered = assemble_stress_trace(
            piston_small_mask, surface, polarization, 0, OPTIONS,
            batch_size=7, point_order=list(reversed(range(len(surface)))),
        )
        np.testing.assert_array_equal(canonical.gamma_E, reordered.gamma_E)
        np.testing.assert_array_equal(canonical.gamma_H, reordered.gamma_H)
        assert canonical.static_H == reordered.static_H

    def test_symmetric_body_has_no_net_trace(self):
        geometry = build_custom_rectangles_2d((24, 24), [Block(x0=8, x1=16, y0=8, y1=16)], body=0)
        options = RunOptions(sigma=0.5, courant=0.5, max_steps=20000)
        trace = assemble_stress_trace(
            rasterize(geometry), geometry.stress_surface(), Polarization.TM, 0, options, batch_size=128
        )
        assert trace.n_simulations == 120
        assert np.abs(trace.total).max() < 1e-10

    def test_dump(self, tmp_path):
        trace = StressTrace(dt=0.5, gamma_E=np.ones(3), gamma_H=np.zeros(2), polarization=Polarization.TE, direction=0)
        assert len(trace) == 3
        dump_trace(trace, tmp_path / "trace.csv")
        lines = (tmp_path / "trace.csv").read_text().splitlines()
        assert lines[0] == "step,gamma_E,gamma_H"
        assert len(lines) == 4
