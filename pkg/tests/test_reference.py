import math

import numpy as np
import pytest
from scipy.special import k1

from core.errors import SolverError
from core.model.geometry import Block, build_custom_rectangles_2d, build_parallel_plates_1d, empty_domain
from core.model.mask import rasterize
from core.model.specs import TemperatureSpec
from core.model.staggering import Polarization
from core.reference.grid import force_freq_grid, green_column
from core.reference.lifshitz import lifshitz_1d, lifshitz_1d_cavity
from core.reference.matsubara import (
    frequency_integral,
    matsubara_series,
    matsubara_sum,
    richardson_zero,
)
from core.reference.oracle import force_matsubara_grid, kz_integrand


class TestMatsubara:
    def test_exponential_closed_form(self):
        total = matsubara_sum(lambda xi: math.exp(-xi), 1.0, tail_tol=1e-14, zero_value=1.0)
        assert total == pytest.approx(0.5 * math.pi / math.tanh(0.5 * math.pi), abs=1e-12)
        assert total == pytest.approx(1.57980, abs=1e-5)

    def test_zero_function(self):
        assert matsubara_sum(lambda xi: 0.0, 1.0) == 0.0

    def test_low_temperature_limit(self):
        total = matsubara_sum(lambda xi: math.exp(-xi), 0.01, zero_value=1.0)
        assert total == pytest.approx(1.0, abs=1e-3)

    def test_split(self):
        series = matsubara_series(lambda xi: math.exp(-xi), 1.0, zero_value=1.0)
        assert series.zero_part == pytest.approx(0.5 * math.pi)
        assert series.total == pytest.approx(series.zero_part + series.positive_part)
        partial = series.partial_sums()
        assert partial[-1] == pytest.approx(series.total)
        assert np.all(np.diff(partial) > 0.0)

    def test_non_convergence(self):
        with pytest.raises(SolverError):
            matsubara_series(lambda xi: 1.0, 1.0, n_max=50)

    def test_frequency_integral(self):
        assert frequency_integral(lambda xi: math.exp(-xi), 1.0) == pytest.approx(1.0, rel=1e-8)

    def test_richardson_zero(self):
        assert richardson_zero(math.cos) == pytest.approx(1.0, abs=1e-9)

    def test_kz_integrand(self):
        # (1/pi) * integral exp(-sqrt(xi^2 + kz^2)) d kz = xi * K1(xi) / pi
        value = kz_integrand(lambda xi: math.exp(-xi), 1.0, 1.0, n_kz=64)
        assert value == pytest.approx(k1(1.0) / math.pi, rel=1e-6)


class TestLifshitz:
    def test_zero_temperature(self):
        result = lifshitz_1d(40, 0.0)
        assert result.total * 40**2 == pytest.approx(-math.pi / 24)
        assert result.n0_part == 0.0

    def test_scaling(self):
        assert lifshitz_1d(80, 0.0).total / lifshitz_1d(40, 0.0).total == pytest.approx(0.25, rel=1e-10)

    def test_zero_mode(self):
        a, tau = 30, math.pi
        assert lifshitz_1d(a, tau).n0_part == pytest.approx(-(tau / a) / (2 * a), rel=1e-12)

    def test_matsubara_converges_to_zero_temperature(self):
        assert lifshitz_1d(40, 0.01).total == pytest.approx(lifshitz_1d(40, 0.0).total, rel=1e-3)

    def test_high_temperature(self):
        hot = lifshitz_1d(40, 10 * math.pi)
        hotter = lifshitz_1d(40, 20 * math.pi)
        assert hot.n0_part / hot.total >= 0.99
        assert hot.total / (10 * math.pi) == pytest.approx(hotter.total / (20 * math.pi), rel=1e-3)

    def test_cavity(self):
        geometry = build_parallel_plates_1d(40, wall_thickness=2, pad=20)
        result = lifshitz_1d_cavity(geometry, math.pi)
        expected = lifshitz_1d(40, math.pi).total - lifshitz_1d(20, math.pi, reference_length=40).total
        assert result.total == pytest.approx(expected)


class TestGreen:
    def test_symmetry(self):
        geometry = build_custom_rectangles_2d((20, 16), [Block(x0=6, x1=10, y0=5, y1=9)])
        mask = rasterize(geometry)
        p, q = (3.0, 4.0), (14.0, 11.0)
        for component, pol in (("ez", Polarization.TM), ("hz", Polarization.TE)):
            if component == "hz":
                p, q = (3.5, 4.5), (14.5, 11.5)
            gp = green_column(mask, pol, component, p, 0.3)
            gq = green_column(mask, pol, component, q, 0.3)
            qi = tuple(int(c) for c in q)
            pi = tuple(int(c) for c in p)
            assert gp[qi] == pytest.approx(gq[pi], rel=1e-10)

    def test_decay_rate(self):
        mask = rasterize(empty_domain((400,)))
        xi = 0.2
        column = green_column(mask, Polarization.SCALAR_1D, "ey", (200.0,), xi)
        ratio = column[202] / column[201]
        assert ratio == pytest.approx(math.exp(-math.acosh(1 + xi**2 / 2)), rel=1e-10)
        assert ratio == pytest.approx(math.exp(-xi), rel=0.05)

    def test_converges_to_continuum(self):
        length, x0, xi = 40.0, 10.0, 0.5
        exact = math.sinh(xi * x0) * math.sinh(xi * (length - x0)) / (xi * math.sinh(xi * length))
        errors = []
        for r in (1, 2, 4):
            mask = rasterize(empty_domain((int(length * r),)))
            column = green_column(mask, Polarization.SCALAR_1D, "ey", (x0 * r,), xi / r)
            errors.append(abs(column[int(x0 * r)] / r - exact))
        orders = [math.log2(e0 / e1) for e0, e1 in zip(errors, errors[1:])]
        assert min(orders) >= 1.8

    def test_neumann_constant_mode(self):
        mask = rasterize(empty_domain((50,)))
        xi = 0.05
        column = green_column(mask, Polarization.SCALAR_1D, "hz", (20.5,), xi)
        assert column.sum() == pytest.approx(1.0 / xi**2, rel=1e-10)

    @pytest.mark.parametrize("xi", [1e-3, 1e-5])
    def test_neumann_near_zero_frequency(self, xi):
        geometry = build_custom_rectangles_2d((24, 20), [Block(x0=8, x1=14, y0=6, y1=12)])
        column = green_column(rasterize(geometry), Polarization.TE, "hz", (3.5, 4.5), xi)
        assert np.all(np.isfinite(column))
        assert column.sum() == pytest.approx(1.0 / xi**2, rel=1e-8)

    def test_rejects_zero_frequency(self):
        mask = rasterize(empty_domain((20,)))
        with pytest.raises(SolverError):
            green_column(mask, Polarization.SCALAR_1D, "ey", (10.0,), 0.0)


class TestGridForce:
    def test_mirror_invariance(self):
        blocks = [Block(x0=4, x1=12, y0=3, y1=11), Block(x0=16, x1=24, y0=6, y1=14)]
        geometry = build_custom_rectangles_2d((28, 18), blocks, body=0)
        mirror = geometry.mirrored(1)
        for pol in (Polarization.TE, Polarization.TM):
            f = force_freq_grid(rasterize(geometry), 0.3, pol, geometry.stress_surface())
            g = force_freq_grid(rasterize(mirror), 0.3, pol, mirror.stress_surface())
            assert f == pytest.approx(g, rel=1e-9)

    def test_zero_temperature_transverse_electric(self):
        blocks = [Block(x0=4, x1=12, y0=3, y1=11), Block(x0=16, x1=24, y0=3, y1=11)]
        geometry = build_custom_rectangles_2d((28, 16), blocks, body=0)
        mirror = geometry.mirrored(1)
        temperature = TemperatureSpec(tau=0.0, a=4)
        results = [
            force_matsubara_grid(rasterize(g), temperature, [Polarization.TE], g.stress_surface())
            for g in (geometry, mirror)
        ]
        assert math.isfinite(results[0].total) and results[0].total != 0.0
        assert results[0].n0_part == 0.0
        assert results[0].total == pytest.approx(results[1].total, rel=1e-8)

    def test_one_dimensional_plates(self):
        geometry = build_parallel_plates_1d(20, wall_thickness=2, pad=40)
        temperature = TemperatureSpec(tau=math.pi, a=20)
        result = force_matsubara_grid(
            rasterize(geometry), temperature, [Polarization.SCALAR_1D], geometry.stress_surface()
        )
        expected = lifshitz_1d_cavity(geometry, math.pi)
        assert result.total == pytest.approx(expected.total, rel=0.02)
        assert result.n0_part == pytest.approx(expected.n0_part, rel=0.02)
