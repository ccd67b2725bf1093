"""
Matsubara summation and imaginary-frequency quadrature.

    F(T) = pi*omega_T * [ f(0+)/2 + sum_{n>=1} f(n*pi*omega_T) ]

which is the trapezoidal rule for F(0) = integral_0^inf f(xi) d xi on the
grid xi_n = n*pi*omega_T.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..errors import SolverError

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 100000
DEFAULT_TAIL_TOL = 1e-10


@dataclass
class MatsubaraSeries:
    """
    Terms of a Matsubara sum.

    `terms` rows are (n, xi_n, f(xi_n)); the n = 0 row holds f(0+), and its
    1/2 weight is applied in `zero_part` and `total`.
    """

    omega_T: float
    terms: List[Tuple[int, float, float]] = field(default_factory=list)
    tail: float = 0.0

    @property
    def truncation(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    @property
    def zero_part(self) -> float:
        return math.pi * self.omega_T * 0.5 * self.terms[0][2] if self.terms else 0.0

    @property
    def positive_part(self) -> float:
        return math.pi * self.omega_T * math.fsum(t[2] for t in self.terms[1:])

    @property
    def total(self) -> float:
        return self.zero_part + self.positive_part

    def partial_sums(self) -> np.ndarray:
        """Running totals after each term (n = 0 included with weight 1/2)."""
        values = np.array([t[2] for t in self.terms])
        if values.size:
            values[0] *= 0.5
        return math.pi * self.omega_T * np.cumsum(values)


def matsubara_series(
    f: Callable[[float], float],
    omega_T: float,
    n_max: int = DEFAULT_N_MAX,
    tail_tol: float = DEFAULT_TAIL_TOL,
    zero_value: Optional[float] = None,
) -> MatsubaraSeries:
    """
    Sum f over Matsubara frequencies until the estimated tail is below
    tail_tol times the partial sum.

    Args:
        f: Imaginary-frequency integrand (must decay)
        omega_T: 2*T in grid units
        n_max: Largest n tried
        tail_tol: Relative tail tolerance
        zero_value: f(0+); evaluated just above zero when omitted

    Returns:
        MatsubaraSeries

    Raises:
        SolverError: If the tail criterion is unmet by n_max
    """
    if omega_T <= 0.0:
        raise SolverError(f"Matsubara sum needs omega_T > 0, got {omega_T}")
    step = math.pi * omega_T
    f0 = float(f(1e-9 * step)) if zero_value is None else float(zero_value)
    series = MatsubaraSeries(omega_T=omega_T, terms=[(0, 0.0, f0)])

    partial = 0.5 * f0
    previous = None
    for n in range(1, n_max + 1):
        value = float(f(n * step))
        series.terms.append((n, n * step, value))
        partial += value
        if previous is not None and abs(previous) > 0.0:
            ratio = abs(value / previous)
            tail = abs(value) * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
        else:
            tail = abs(value)
        if tail <= tail_tol * abs(partial):
            series.tail = step * tail
            logger.debug(f"Matsubara sum converged at n={n} (tail {series.tail:.2e})")
            return series
        previous = value
    raise SolverError(f"Matsubara sum did not converge within {n_max} terms")


def matsubara_sum(
    f: Callable[[float], float],
    omega_T: float,
    n_max: int = DEFAULT_N_MAX,
    tail_tol: float = DEFAULT_TAIL_TOL,
    zero_value: Optional[float] = None,
) -> float:
    return matsubara_series(f, omega_T, n_max, tail_tol, zero_value).total


def frequency_integral(f: Callable[[float], float], scale: float, n_nodes: int = 64) -> float:
    """
    integral_0^inf f(xi) d xi by Gauss-Legendre on xi = scale*(1+x)/(1-x).

    `scale` should be of the order of the decay length of f in xi.
    """
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    xi = scale * (1.0 + x) / (1.0 - x)
    jacobian = 2.0 * scale / (1.0 - x) ** 2
    values = np.array([f(float(v)) for v in xi])
    return float(np.sum(w * jacobian * values))


def richardson_zero(f: Callable[[float], float], xi0: float = 1e-2) -> float:
    """f(0+) from f(xi0) and f(xi0/2), assuming an expansion in xi**2."""
    return (4.0 * f(0.5 * xi0) - f(xi0)) / 3.0
