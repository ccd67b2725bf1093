"""
Contour and temperature specifications.

Internal units set hbar = c = k_B = 1 and the grid spacing to 1, so
lengths are cell counts and temperature only enters through
omega_T = 2T. User-facing temperatures are the dimensionless
tau = T * a for a reference length a.
"""

import math

from pydantic import BaseModel, ConfigDict, Field

from ..errors import ContourError, SynthesisError


class TemperatureSpec(BaseModel):
    """Temperature of a run, stored as tau = T*a."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(0.0, ge=0.0, description="Dimensionless temperature T*a")
    a: float = Field(..., gt=0.0, description="Reference length in cells")

    @property
    def temperature(self) -> float:
        """Temperature in grid units (k_B T)."""
        return self.tau / self.a

    @property
    def omega_T(self) -> float:
        return 2.0 * self.temperature

    @property
    def is_zero(self) -> bool:
        return self.tau == 0.0

    def matsubara_frequency(self, n: int) -> float:
        """xi_n = n * pi * omega_T."""
        return n * math.pi * self.omega_T

    def scaled(self, factor: float) -> "TemperatureSpec":
        return TemperatureSpec(tau=self.tau * factor, a=self.a)


class ContourSpec(BaseModel):
    """
    Artificial-conductivity contour omega(xi) = xi*sqrt(1 + i*sigma/xi)
    together with the sampled spectrum band.
    """

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(..., ge=0.0, description="Conductivity rate (1/time)")
    xi_max: float = Field(..., gt=0.0, description="Spectrum cutoff")
    n_xi: int = Field(..., ge=2, description="Spectrum sample count")

    @classmethod
    def for_window(cls, sigma: float, dt: float, n_steps: int) -> "ContourSpec":
        """
        Contour matched to a time window: cutoff at the Nyquist frequency
        pi/dt and spacing 2*pi/(n_steps*dt).

        Args:
            sigma: Conductivity rate
            dt: Time step
            n_steps: Number of time samples in the window

        Returns:
            ContourSpec with xi_max = pi/dt and n_xi = n_steps // 2
        """
        if n_steps < 4:
            raise SynthesisError(f"time window too short: {n_steps} steps")
        return cls(sigma=sigma, xi_max=math.pi / dt, n_xi=n_steps // 2)

    @property
    def d_xi(self) -> float:
        return self.xi_max / self.n_xi

    def check_nyquist(self, dt: float) -> None:
        if self.xi_max > math.pi / dt * (1.0 + 1e-12):
            raise SynthesisError(
                f"spectrum cutoff {self.xi_max:.6g} above Nyquist {math.pi / dt:.6g}"
            )

    def require_zero_mode(self, temperature: TemperatureSpec) -> None:
        """The sigma*k_B*T coefficient vanishes unless sigma > 0."""
        if temperature.tau > 0.0 and self.sigma <= 0.0:
            raise ContourError("zero-frequency contribution requires σ > 0")

    def zero_mode_constant(self, temperature: TemperatureSpec) -> float:
        self.require_zero_mode(temperature)
        return self.sigma * temperature.temperature
