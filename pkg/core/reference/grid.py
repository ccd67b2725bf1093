"""
Imaginary-frequency Green's-function oracle on the FDTD grid.

Each polarization reduces to scalar problems (-Laplacian + xi^2) G = delta
on one staggered lattice:

    1D   E_y  Dirichlet, direct      H_z  Neumann, direct
    TM   E_z  Dirichlet, direct      H_x, H_y  from the same problem by differences
    TE   H_z  Neumann, direct        E_x, E_y  from the same problem by differences

A direct correlator at xi is -xi^2 w.G.w; a difference-mapped one is
b.G.b' with b the transposed difference applied to the probe stencil. The
same-point contact terms of the mapped correlators are left out; they
cancel on closed surfaces. f(xi) = S(i xi)/pi where S is the stress
contraction used by the time-domain path.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import splu

from ..errors import GeometryError, SolverError
from ..model.geometry import StressSurface
from ..model.mask import PECMask
from ..model.staggering import Polarization, component_shape, interpolation_stencil
from ..stress.trace import point_terms

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


class Boundary:
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


def _diff(m: int) -> sp.csr_matrix:
    """(m-1, m) forward difference."""
    return sp.diags([-np.ones(m - 1), np.ones(m - 1)], [0, 1], shape=(m - 1, m), format="csr")


def _diff_ext(m: int) -> sp.csr_matrix:
    """(m+1, m) difference onto the m+1 faces of m cells (one-sided at the ends)."""
    return sp.diags([np.ones(m), -np.ones(m)], [0, -1], shape=(m + 1, m), format="csr")


@dataclass
class ScalarProblem:
    """
    One scalar lattice with its Laplacian and difference maps.

    `maps` sends a mapped component to (matrix from the scalar lattice to
    the component lattice, sign); rows of masked samples are zero.
    """

    name: str
    boundary: str
    laplacian: sp.csr_matrix
    free: np.ndarray
    maps: Dict[str, Tuple[sp.csr_matrix, float]]

    @property
    def size(self) -> int:
        return int(self.free.sum())

    @cached_property
    def zero_modes(self) -> Optional[sp.csr_matrix]:
        """
        Orthonormal constant modes of the free Laplacian, one column per
        connected region; None for Dirichlet lattices, which have none.
        """
        if self.boundary != Boundary.NEUMANN:
            return None
        restricted = self.laplacian[self.free][:, self.free].tocsr()
        restricted.eliminate_zeros()
        n_regions, labels = connected_components(restricted, directed=False)
        counts = np.bincount(labels, minlength=n_regions).astype(float)
        values = 1.0 / np.sqrt(counts[labels])
        return sp.csr_matrix((values, (np.arange(labels.size), labels)), shape=(labels.size, n_regions))


def _dirichlet_problem(mask: PECMask, polarization: Polarization) -> ScalarProblem:
    cells = mask.cells
    if polarization == Polarization.SCALAR_1D:
        n = cells[0]
        d = _diff(n + 1)
        free = ~mask.electric["ey"]
        return ScalarProblem("ey", Boundary.DIRICHLET, (d.T @ d).tocsr(), free, {})

    nx, ny = cells
    dx = sp.kron(_diff(nx + 1), sp.identity(ny + 1), format="csr")
    dy = sp.kron(sp.identity(nx + 1), _diff(ny + 1), format="csr")
    laplacian = (dx.T @ dx + dy.T @ dy).tocsr()
    free = ~mask.electric["ez"].reshape(-1)
    # H_x = d_y psi, H_y = -d_x psi
    return ScalarProblem("ez", Boundary.DIRICHLET, laplacian, free, {"hx": (dy, 1.0), "hy": (dx, -1.0)})


def _neumann_problem(mask: PECMask, polarization: Polarization) -> ScalarProblem:
    cells = mask.cells
    if polarization == Polarization.SCALAR_1D:
        n = cells[0]
        d = _diff(n + 1)
        open_faces = sp.diags((~mask.electric["ey"]).astype(float))
        laplacian = (d @ open_faces @ d.T).tocsr()
        return ScalarProblem("hz", Boundary.NEUMANN, laplacian, np.ones(n, dtype=bool), {})

    nx, ny = cells
    cy = sp.kron(sp.identity(nx), _diff_ext(ny), format="csr")
    cx = sp.kron(_diff_ext(nx), sp.identity(ny), format="csr")
    px = sp.diags((~mask.electric["ex"]).reshape(-1).astype(float))
    py = sp.diags((~mask.electric["ey"]).reshape(-1).astype(float))
    laplacian = (cy.T @ px @ cy + cx.T @ py @ cx).tocsr()
    # E_x = d_y H_z, E_y = -d_x H_z; masked E rows removed
    maps = {"ex": ((px @ cy).tocsr(), 1.0), "ey": ((py @ cx).tocsr(), -1.0)}
    return ScalarProblem("hz", Boundary.NEUMANN, laplacian, np.ones(nx * ny, dtype=bool), maps)


def scalar_problems(mask: PECMask, polarization: Polarization) -> List[ScalarProblem]:
    polarization = Polarization(polarization)
    if polarization == Polarization.TM:
        return [_dirichlet_problem(mask, polarization)]
    if polarization == Polarization.TE:
        return [_neumann_problem(mask, polarization)]
    return [_dirichlet_problem(mask, polarization), _neumann_problem(mask, polarization)]


def _owner(problems: Sequence[ScalarProblem], component: str) -> Tuple[ScalarProblem, bool]:
    for problem in problems:
        if problem.name == component:
            return problem, True
        if component in problem.maps:
            return problem, False
    raise GeometryError(f"no scalar problem carries component {component}")


def _probe_vector(problem: ScalarProblem, component: str, position, cells, direct: bool) -> np.ndarray:
    shape = component_shape(component, cells)
    w = np.zeros(int(np.prod(shape)))
    for idx, weight in interpolation_stencil(component, position, cells):
        w[np.ravel_multi_index(idx, shape)] += weight
    if direct:
        return w[problem.free]
    matrix, sign = problem.maps[component]
    return sign * (matrix.T @ w)[problem.free]


def green_solve_imagfreq(problem: ScalarProblem, xi: float, rhs: np.ndarray) -> np.ndarray:
    """
    Solve (L + xi^2) G = rhs on the free samples of a scalar lattice.

    Args:
        problem: Scalar lattice and boundary condition
        xi: Imaginary frequency (> 0)
        rhs: One column per source, length problem.size

    Returns:
        Solution columns

    Neumann lattices are singular at xi = 0: their constant modes are
    split off and solved exactly as P0 rhs / xi^2, so the factorized
    system only sees the well-conditioned complement.

    Raises:
        SolverError: xi <= 0 or residual above tolerance
    """
    if xi <= 0.0:
        raise SolverError(f"imaginary-frequency solve needs xi > 0, got {xi}")
    free = problem.free
    operator = problem.laplacian[free][:, free] + xi * xi * sp.identity(problem.size, format="csr")
    lu = splu(operator.tocsc())
    rhs = np.asarray(rhs, dtype=float)

    modes = problem.zero_modes
    constant = np.zeros_like(rhs)
    if modes is not None:
        constant = modes @ (modes.T @ rhs)
    regular = rhs - constant

    solution = lu.solve(regular)
    if modes is not None:
        solution -= modes @ (modes.T @ solution)
        # one refinement step against the projected residual
        solution += lu.solve(regular - operator @ solution)
        solution -= modes @ (modes.T @ solution)

    residual = np.linalg.norm(operator @ solution - regular) / max(np.linalg.norm(rhs), 1e-300)
    if residual > RESIDUAL_TOL:
        raise SolverError(f"{problem.boundary} solve residual {residual:.2e} at xi={xi}")
    return solution + constant / (xi * xi)


def green_column(mask: PECMask, polarization: Polarization, component: str, position, xi: float) -> np.ndarray:
    """Green's column of a directly solved component, as a full lattice array."""
    problems = scalar_problems(mask, polarization)
    problem, direct = _owner(problems, component)
    if not direct:
        raise GeometryError(f"{component} is not a directly solved component")
    w = _probe_vector(problem, component, position, mask.cells, True)
    column = np.zeros(problem.free.size)
    column[problem.free] = green_solve_imagfreq(problem, xi, w)
    return column.reshape(component_shape(component, mask.cells))


class GridForceIntegrand:
    """
    f(xi) for one geometry, polarization and surface.

    Probe vectors are built once; each evaluation factorizes the scalar
    operators at xi and contracts with the stress coefficients.
    """

    def __init__(self, mask: PECMask, polarization: Polarization, surface: StressSurface, direction: int = 0):
        self.mask = mask
        self.polarization = Polarization(polarization)
        self.problems = scalar_problems(mask, self.polarization)
        self.terms: List[Tuple[ScalarProblem, bool, int, int, float]] = []

        columns: Dict[int, List[np.ndarray]] = {id(p): [] for p in self.problems}
        index: Dict[Tuple[int, str], int] = {}
        for p, point in enumerate(surface.points):
            for (src, dst), coeff in point_terms(point, self.polarization, direction).items():
                problem, direct = _owner(self.problems, src)
                cols = []
                for c in (src, dst):
                    if (p, c) not in index:
                        index[(p, c)] = len(columns[id(problem)])
                        columns[id(problem)].append(_probe_vector(problem, c, point.position, mask.cells, direct))
                    cols.append(index[(p, c)])
                self.terms.append((problem, direct, cols[0], cols[1], coeff))

        self.probes = {
            id(p): np.column_stack(columns[id(p)]) if columns[id(p)] else np.zeros((p.size, 0))
            for p in self.problems
        }

    def __call__(self, xi: float) -> float:
        solved = {
            id(p): green_solve_imagfreq(p, xi, self.probes[id(p)]) if self.probes[id(p)].shape[1] else None
            for p in self.problems
        }
        total = 0.0
        for problem, direct, i, j, coeff in self.terms:
            b = self.probes[id(problem)]
            corr = float(b[:, i] @ solved[id(problem)][:, j])
            total += coeff * (-xi * xi * corr if direct else corr)
        return total / np.pi


def force_freq_grid(
    mask: PECMask,
    xi: float,
    polarization: Polarization,
    surface: StressSurface,
    direction: int = 0,
) -> float:
    """Imaginary-frequency force integrand f(xi) on the grid."""
    return GridForceIntegrand(mask, polarization, surface, direction)(xi)
