"""Concrete leapfrog updates for the 1D, TM and TE field sets."""

import math

from ..model.staggering import Polarization
from .base import BaseSolver, Currents


def _get(currents: Currents, name: str):
    return None if currents is None else currents.get(name)


class Solver1D(BaseSolver):
    """E_y on nodes, H_z on half-nodes; propagation along x."""

    polarization = Polarization.SCALAR_1D
    courant_limit = 1.0

    def update_h(self, K: Currents = None) -> None:
        ey, hz = self.fields["ey"], self.fields["hz"]
        hz -= self.dt * (ey[:, 1:] - ey[:, :-1])
        k = _get(K, "hz")
        if k is not None:
            hz -= self.dt * k

    def update_e(self, J: Currents = None) -> None:
        ey, hz = self.fields["ey"], self.fields["hz"]
        j = _get(J, "ey")
        curl = -(hz[:, 1:] - hz[:, :-1])
        ey[:, 1:-1] = self._damped(ey[:, 1:-1], curl, None if j is None else j[:, 1:-1])


class SolverTM(BaseSolver):
    """E_z, H_x, H_y."""

    polarization = Polarization.TM
    courant_limit = 1.0 / math.sqrt(2.0)

    def update_h(self, K: Currents = None) -> None:
        ez, hx, hy = self.fields["ez"], self.fields["hx"], self.fields["hy"]
        hx -= self.dt * (ez[:, :, 1:] - ez[:, :, :-1])
        hy += self.dt * (ez[:, 1:, :] - ez[:, :-1, :])
        for name, h in (("hx", hx), ("hy", hy)):
            k = _get(K, name)
            if k is not None:
                h -= self.dt * k

    def update_e(self, J: Currents = None) -> None:
        ez, hx, hy = self.fields["ez"], self.fields["hx"], self.fields["hy"]
        curl = (hy[:, 1:, 1:-1] - hy[:, :-1, 1:-1]) - (hx[:, 1:-1, 1:] - hx[:, 1:-1, :-1])
        j = _get(J, "ez")
        ez[:, 1:-1, 1:-1] = self._damped(ez[:, 1:-1, 1:-1], curl, None if j is None else j[:, 1:-1, 1:-1])


class SolverTE(BaseSolver):
    """H_z, E_x, E_y."""

    polarization = Polarization.TE
    courant_limit = 1.0 / math.sqrt(2.0)

    def update_h(self, K: Currents = None) -> None:
        hz, ex, ey = self.fields["hz"], self.fields["ex"], self.fields["ey"]
        hz -= self.dt * ((ey[:, 1:, :] - ey[:, :-1, :]) - (ex[:, :, 1:] - ex[:, :, :-1]))
        k = _get(K, "hz")
        if k is not None:
            hz -= self.dt * k

    def update_e(self, J: Currents = None) -> None:
        hz, ex, ey = self.fields["hz"], self.fields["ex"], self.fields["ey"]
        jx, jy = _get(J, "ex"), _get(J, "ey")
        ex[:, :, 1:-1] = self._damped(
            ex[:, :, 1:-1], hz[:, :, 1:] - hz[:, :, :-1], None if jx is None else jx[:, :, 1:-1]
        )
        ey[:, 1:-1, :] = self._damped(
            ey[:, 1:-1, :], -(hz[:, 1:, :] - hz[:, :-1, :]), None if jy is None else jy[:, 1:-1, :]
        )


SOLVERS = {
    Polarization.SCALAR_1D: Solver1D,
    Polarization.TM: SolverTM,
    Polarization.TE: SolverTE,
}


def make_solver(polarization: Polarization, *args, **kwargs) -> BaseSolver:
    return SOLVERS[Polarization(polarization)](*args, **kwargs)
