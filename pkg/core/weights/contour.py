"""
Frequency-contour weight functions.

All functions are vectorized over `xi` and return complex arrays (or
complex scalars for scalar input). The contour is

    omega(xi) = xi * sqrt(1 + i*sigma/xi)

and the zero-temperature weight is g(xi) = -i*omega*(1 + i*sigma/(2*xi)).
"""

import numpy as np

from ..errors import ContourError

# Below this |z| the difference coth(z) - 1/z is taken from its series.
SERIES_THRESHOLD = 1e-3
# Above this Re(z) coth(z) is 1 to double precision.
COTH_SATURATION = 20.0


def _as_positive(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if np.any(xi <= 0.0):
        raise ContourError("contour is evaluated only at positive real xi")
    return xi


def _unwrap(value: np.ndarray, like):
    return value if np.ndim(like) else complex(value)


def omega_contour(xi, sigma: float):
    """Principal-branch xi*sqrt(1 + i*sigma/xi); real and imaginary parts are nonnegative."""
    if sigma < 0.0:
        raise ContourError(f"sigma must be nonnegative, got {sigma}")
    x = _as_positive(xi)
    return _unwrap(x * np.sqrt(1.0 + 1j * sigma / x), xi)


def weight_T0(xi, sigma: float):
    x = _as_positive(xi)
    omega = np.asarray(omega_contour(x, sigma))
    return _unwrap(-1j * omega * (1.0 + 0.5j * sigma / x), xi)


def coth(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    live = z.real < COTH_SATURATION
    out[live] = 1.0 / np.tanh(z[live])
    return out


def coth_minus_inverse(z: np.ndarray) -> np.ndarray:
    """coth(z) - 1/z without cancellation near z = 0."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < SERIES_THRESHOLD
    zs = z[small]
    out[small] = zs / 3.0 - zs**3 / 45.0 + 2.0 * zs**5 / 945.0
    out[~small] = coth(z[~small]) - 1.0 / z[~small]
    return out


def weight_naive(xi, sigma: float, omega_T: float):
    """T=0 weight times coth(omega/omega_T); the xi=0 pole is left in place."""
    if omega_T <= 0.0:
        raise ContourError("naive weight needs omega_T > 0; use weight_T0 at zero temperature")
    x = _as_positive(xi)
    omega = np.asarray(omega_contour(x, sigma))
    return _unwrap(np.asarray(weight_T0(x, sigma)) * coth(omega / omega_T), xi)


def weight_pole_subtracted(xi, sigma: float, omega_T: float):
    """
    T=0 weight times coth(omega/omega_T) - omega_T/omega.

    Finite for every xi > 0 with limit i*sigma**2/(6*omega_T) as xi -> 0+.
    """
    if omega_T <= 0.0:
        raise ContourError("pole-subtracted weight needs omega_T > 0")
    if sigma <= 0.0:
        raise ContourError("zero-frequency contribution requires σ > 0")
    x = _as_positive(xi)
    omega = np.asarray(omega_contour(x, sigma))
    return _unwrap(np.asarray(weight_T0(x, sigma)) * coth_minus_inverse(omega / omega_T), xi)


def pole_subtracted_limit(sigma: float, omega_T: float) -> complex:
    """xi -> 0+ value of the pole-subtracted electric weight."""
    return 1j * sigma**2 / (6.0 * omega_T)


def magnetic_factor(xi, sigma: float):
    """Divisor turning an electric weight into its magnetic counterpart."""
    x = _as_positive(xi)
    return _unwrap(1.0 + 1j * sigma / x, xi)


def sqrt_legendre(lo: float, hi: float, n: int):
    """
    Gauss-Legendre nodes and weights on [lo, hi] in the variable u = sqrt(xi).

    The Jacobian 2u is folded into the weights, so xi**-1/2 endpoint
    behaviour integrates as a smooth function.
    """
    if not 0.0 <= lo < hi:
        raise ContourError(f"bad quadrature segment [{lo}, {hi}]")
    x, w = np.polynomial.legendre.leggauss(n)
    u_lo, u_hi = np.sqrt(lo), np.sqrt(hi)
    half = 0.5 * (u_hi - u_lo)
    u = half * x + 0.5 * (u_hi + u_lo)
    return u * u, w * half * 2.0 * u
