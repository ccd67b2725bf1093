import math

import numpy as np
import pytest

from core.errors import GeometryError, NonDecayingRunError, StabilityError
from core.fdtd.run import (
    DipoleSource,
    Probe,
    RunOptions,
    modified_energy,
    run_batch,
    self_response,
)
from core.fdtd.solvers import Solver1D, SolverTE, SolverTM, make_solver
from core.model.geometry import empty_domain
from core.model.mask import rasterize
from core.model.staggering import Polarization

OPTIONS = RunOptions(sigma=0.3, courant=0.5, max_steps=20000)


class TestSolverStep:
    def test_zero_fields_stay_zero(self, piston_small_mask):
        solver = SolverTE(piston_small_mask, sigma=0.1)
        for _ in range(5):
            solver.step()
        assert all(not a.any() for a in solver.fields.values())
        assert solver.state.time_index == 5

    def test_uniform_field_damping(self):
        sigma, dt = 0.2, 0.5
        solver = Solver1D(rasterize(empty_domain((40,))), sigma=sigma, courant=dt)
        solver.fields["ey"][:, 1:-1] = 1.0
        solver.step()
        ca = (1 - sigma * dt / 2) / (1 + sigma * dt / 2)
        assert solver.fields["ey"][0, 20] == pytest.approx(ca, rel=1e-15)
        assert ca == pytest.approx(math.exp(-sigma * dt), abs=(sigma * dt) ** 3)

    def test_magic_time_step(self):
        n = 200
        solver = Solver1D(rasterize(empty_domain((n,))), sigma=0.0, courant=1.0)
        pulse = lambda x: np.exp(-0.5 * ((x - 60.0) / 5.0) ** 2)
        solver.fields["ey"][0] = pulse(np.arange(n + 1))
        solver.fields["ey"][0, [0, -1]] = 0.0
        # H at t = -dt/2 for a right-moving wave
        solver.fields["hz"][0] = pulse(np.arange(n) + 1.0)
        initial = solver.fields["ey"][0].copy()
        for _ in range(30):
            solver.step()
        np.testing.assert_allclose(solver.fields["ey"][0, 30:150], initial[0:120], atol=1e-12)

    def test_courant_limits(self, piston_small_mask):
        Solver1D(rasterize(empty_domain((20,))), sigma=0.0, courant=1.0)
        with pytest.raises(StabilityError):
            SolverTM(piston_small_mask, sigma=0.0, courant=0.75)
        with pytest.raises(StabilityError):
            make_solver(Polarization.TE, piston_small_mask, 0.1, 0.0)

    def test_pec_mask_holds(self, piston_small_mask):
        solver = SolverTE(piston_small_mask, sigma=0.1, batch=2)
        rng = np.random.default_rng(7)
        for name in solver.fields:
            solver.fields[name][...] = rng.standard_normal(solver.fields[name].shape)
        for _ in range(10):
            solver.step()
        assert solver.state.pec_violation() == 0.0
        assert solver.state.is_finite()


class TestEnergy:
    def test_conserved_without_conductivity(self, piston_small_mask):
        source = DipoleSource(position=(14.0, 8.0), component="ez")
        energy = modified_energy(piston_small_mask, Polarization.TM, source, sigma=0.0, n_steps=400)
        np.testing.assert_allclose(energy, energy[0], rtol=1e-10)

    def test_non_increasing_with_conductivity(self, piston_small_mask):
        source = DipoleSource(position=(14.5, 8.5), component="hz")
        energy = modified_energy(piston_small_mask, Polarization.TE, source, sigma=0.2, n_steps=400)
        assert np.all(np.diff(energy) <= 1e-12 * energy[0])
        assert energy[-1] < 0.5 * energy[0]


class TestImpulseResponse:
    def test_reciprocity(self, piston_small_mask):
        p, q = (13.0, 3.0), (14.0, 13.0)
        sources = [DipoleSource(p, "ez"), DipoleSource(q, "ez")]
        probes = [[Probe(q, "ez")], [Probe(p, "ez")]]
        forward, backward = run_batch(piston_small_mask, Polarization.TM, sources, probes, OPTIONS)
        m = min(forward.n_steps, backward.n_steps)
        np.testing.assert_allclose(forward[(q, "ez")][:m], backward[(p, "ez")][:m], atol=1e-12)

    @pytest.mark.parametrize(
        "polarization, j, x, k, y",
        [
            (Polarization.TM, "ez", (10.0, 11.0), "ez", (20.0, 17.0)),
            (Polarization.TM, "hx", (10.0, 11.5), "hy", (20.5, 17.0)),
            (Polarization.TE, "ex", (10.5, 11.0), "ey", (20.0, 17.5)),
            (Polarization.TE, "hz", (10.5, 11.5), "hz", (20.5, 17.5)),
        ],
    )
    def test_reciprocity_in_vacuum(self, polarization, j, x, k, y):
        mask = rasterize(empty_domain((32, 32)))
        sources = [DipoleSource(y, k), DipoleSource(x, j)]
        probes = [[Probe(x, j)], [Probe(y, k)]]
        forward, backward = run_batch(mask, polarization, sources, probes, OPTIONS)
        m = min(forward.n_steps, backward.n_steps)
        there = forward[(x, j)][:m] + forward.static_levels.get((x, j), 0.0)
        back = backward[(y, k)][:m] + backward.static_levels.get((y, k), 0.0)
        np.testing.assert_allclose(there, back, rtol=0.0, atol=1e-12)

    def test_member_independent_of_batch(self, piston_small_mask):
        p, q = (13.0, 3.0), (14.0, 13.0)
        alone = run_batch(piston_small_mask, Polarization.TM, [DipoleSource(p, "ez")], [[Probe(p, "ez")]], OPTIONS)[0]
        paired = run_batch(
            piston_small_mask,
            Polarization.TM,
            [DipoleSource(p, "ez"), DipoleSource(q, "ez", 5.0)],
            [[Probe(p, "ez")], [Probe(q, "ez"), Probe(p, "ez")]],
            OPTIONS,
        )[0]
        np.testing.assert_array_equal(alone[(p, "ez")], paired[(p, "ez")])

    def test_linearity(self, plates_small_mask):
        point = (13.0,)
        responses = run_batch(
            plates_small_mask,
            Polarization.SCALAR_1D,
            [DipoleSource(point, "ey", 1.0), DipoleSource(point, "ey", 2.0), DipoleSource(point, "ey", 0.0)],
            [[Probe(point, "ey")]] * 3,
            OPTIONS,
        )
        one, two, zero = (r[(point, "ey")] for r in responses)
        np.testing.assert_allclose(two, 2.0 * one, rtol=1e-12, atol=1e-15)
        assert not zero.any()

    def test_response_decays(self, plates_small_mask):
        series = self_response(plates_small_mask, Polarization.SCALAR_1D, (13.0,), "ey", OPTIONS)
        window = max(1, int(0.05 * series.size))
        assert np.abs(series[-window:]).max() <= OPTIONS.tail_tol * np.abs(series).max()

    def test_static_magnetic_level_removed(self, plates_small_mask):
        source = DipoleSource((13.5,), "hz")
        response = run_batch(plates_small_mask, Polarization.SCALAR_1D, [source], [[Probe((13.5,), "hz")]], OPTIONS)[0]
        assert ((13.5,), "hz") in response.static_levels
        assert abs(response[((13.5,), "hz")][-1]) < 1e-4

    def test_mirrored_geometry(self, piston_small):
        options = RunOptions(sigma=0.3, courant=0.5, max_steps=20000)
        mirror = piston_small.mirrored(0)
        nx = piston_small.cells[0]
        left = self_response(rasterize(piston_small), Polarization.TM, (13.0, 3.0), "ez", options)
        right = self_response(rasterize(mirror), Polarization.TM, (nx - 13.0, 3.0), "ez", options)
        np.testing.assert_allclose(left, right, rtol=1e-12, atol=1e-14)

    def test_source_in_conductor(self, piston_small_mask):
        with pytest.raises(GeometryError):
            run_batch(piston_small_mask, Polarization.TM, [DipoleSource((6.0, 6.0), "ez")], [[]], OPTIONS)

    def test_non_decaying_run(self, plates_small_mask):
        options = RunOptions(sigma=0.0, courant=0.5, max_steps=300)
        with pytest.raises(NonDecayingRunError) as excinfo:
            self_response(plates_small_mask, Polarization.SCALAR_1D, (13.0,), "ey", options)
        assert excinfo.value.steps == 300
