"""
Base solver for the damped staggered-grid Maxwell equations.

    dE/dt =  curl H - sigma*E - J
    dH/dt = -curl E - K

Fields carry a leading batch axis so independent sources advance in one
vectorized update. Conductivity damps E only.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple
import logging
import math

import numpy as np

from ..errors import StabilityError
from ..model.mask import PECMask
from ..model.staggering import FieldType, Polarization, all_components, component_shape, components

logger = logging.getLogger(__name__)

Currents = Optional[Dict[str, np.ndarray]]


@dataclass
class FieldState:
    """Staggered field arrays (batch, *component shape) at one time index."""

    fields: Dict[str, np.ndarray]
    mask: PECMask
    time_index: int = 0

    @property
    def batch(self) -> int:
        return next(iter(self.fields.values())).shape[0]

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.fields.values())

    def pec_violation(self) -> float:
        """Largest |E| on a masked sample (0 when the mask holds)."""
        worst = 0.0
        for name, m in self.mask.electric.items():
            if name in self.fields and m.any():
                worst = max(worst, float(np.abs(self.fields[name][:, m]).max()))
        return worst


class BaseSolver(ABC):
    """Abstract base class for the 1D, TM and TE leapfrog solvers."""

    polarization: Polarization
    courant_limit: float = 1.0 / math.sqrt(2.0)

    def __init__(
        self,
        mask: PECMask,
        sigma: float,
        courant: float = 0.5,
        batch: int = 1,
        track_energy: bool = False,
    ):
        """
        Initialize solver.

        Args:
            mask: Rasterized conductors
            sigma: Conductivity rate applied to E
            courant: dt in units of dx/c
            batch: Number of independent field copies
            track_energy: Record the modified leapfrog energy each step
        """
        if courant <= 0.0 or courant > self.courant_limit + 1e-12:
            raise StabilityError(
                f"Courant factor {courant} outside (0, {self.courant_limit:.4f}] for {self.polarization.value}"
            )
        if sigma < 0.0:
            raise StabilityError(f"conductivity must be nonnegative, got {sigma}")

        self.mask = mask
        self.sigma = sigma
        self.dt = courant
        self.track_energy = track_energy
        self.energy_history: List[np.ndarray] = []

        half = 0.5 * sigma * self.dt
        self.ca = (1.0 - half) / (1.0 + half)
        self.cb = self.dt / (1.0 + half)

        cells = mask.cells
        self.state = FieldState(
            fields={c: np.zeros((batch,) + component_shape(c, cells)) for c in all_components(self.polarization)},
            mask=mask,
        )

    @property
    def fields(self) -> Dict[str, np.ndarray]:
        return self.state.fields

    @property
    def batch(self) -> int:
        return self.state.batch

    @abstractmethod
    def update_h(self, K: Currents = None) -> None:
        """Advance H by one step from curl E."""
        pass

    @abstractmethod
    def update_e(self, J: Currents = None) -> None:
        """Advance E by one damped step from curl H."""
        pass

    def _damped(self, e: np.ndarray, curl: np.ndarray, current: Optional[np.ndarray]) -> np.ndarray:
        drive = curl if current is None else curl - current
        return self.ca * e + self.cb * drive

    def enforce_pec(self) -> None:
        for name in components(self.polarization, FieldType.ELECTRIC):
            self.fields[name][:, self.mask.electric[name]] = 0.0

    def step(self, J: Currents = None, K: Currents = None) -> None:
        """
        One leapfrog step: H^{n+1/2} from E^n, then E^{n+1}, then the mask.

        Args:
            J: Electric current density per E component, applied this step
            K: Magnetic current density per H component, applied this step
        """
        magnetic = components(self.polarization, FieldType.MAGNETIC)
        if self.track_energy:
            h_old = {c: self.fields[c].copy() for c in magnetic}

        self.update_h(K)

        if self.track_energy:
            self.energy_history.append(self._modified_energy(h_old))

        self.update_e(J)
        self.enforce_pec()
        self.state.time_index += 1

    def _modified_energy(self, h_old: Dict[str, np.ndarray]) -> np.ndarray:
        """|E^n|^2 + H^{n-1/2} . H^{n+1/2} per batch member."""
        axes: Tuple[int, ...] = tuple(range(1, self.mask.occupancy.ndim + 1))
        energy = np.zeros(self.batch)
        for c in components(self.polarization, FieldType.ELECTRIC):
            energy += np.sum(self.fields[c] ** 2, axis=axes)
        for c, old in h_old.items():
            energy += np.sum(old * self.fields[c], axis=axes)
        return energy

    def reset(self) -> None:
        for array in self.fields.values():
            array[...] = 0.0
        self.state.time_index = 0
        self.energy_history.clear()
