"""
Staggered (Yee) placement of field components.

Cell (i, j) spans [i, i+1] x [j, j+1]. Every component lives on a lattice
offset by 0 or 1/2 cell along each axis:

    1D:  E_y at nodes i,            H_z at i + 1/2
    TM:  E_z at nodes (i, j),       H_x at (i, j + 1/2),  H_y at (i + 1/2, j)
    TE:  H_z at (i + 1/2, j + 1/2), E_x at (i + 1/2, j),  E_y at (i, j + 1/2)

A component sampled at a point that is not on its own lattice is taken as
the linear (or bilinear) average of the neighbouring samples. The same
stencil is used to inject a source and to read a probe, so a same-point
response is the interpolated autocorrelation.
"""

from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

Index = Tuple[int, ...]
Stencil = Tuple[Tuple[Index, float], ...]


class Polarization(str, Enum):
    """Field decompositions handled by the solver."""
    TM = "tm"
    TE = "te"
    SCALAR_1D = "1d"


class FieldType(str, Enum):
    ELECTRIC = "electric"
    MAGNETIC = "magnetic"


_OFFSETS_1D: Dict[str, Tuple[float, ...]] = {
    "ey": (0.0,),
    "hz": (0.5,),
}

_OFFSETS_2D: Dict[str, Tuple[float, ...]] = {
    "ez": (0.0, 0.0),
    "hx": (0.0, 0.5),
    "hy": (0.5, 0.0),
    "hz": (0.5, 0.5),
    "ex": (0.5, 0.0),
    "ey": (0.0, 0.5),
}

_COMPONENTS: Dict[Polarization, Dict[FieldType, Tuple[str, ...]]] = {
    Polarization.SCALAR_1D: {FieldType.ELECTRIC: ("ey",), FieldType.MAGNETIC: ("hz",)},
    Polarization.TM: {FieldType.ELECTRIC: ("ez",), FieldType.MAGNETIC: ("hx", "hy")},
    Polarization.TE: {FieldType.ELECTRIC: ("ex", "ey"), FieldType.MAGNETIC: ("hz",)},
}

AXIS = {"x": 0, "y": 1, "z": 2}


def components(polarization: Polarization, field_type: FieldType) -> Tuple[str, ...]:
    return _COMPONENTS[polarization][field_type]


def all_components(polarization: Polarization) -> Tuple[str, ...]:
    return components(polarization, FieldType.ELECTRIC) + components(polarization, FieldType.MAGNETIC)


def field_type_of(component: str) -> FieldType:
    return FieldType.ELECTRIC if component.startswith("e") else FieldType.MAGNETIC


def component_axis(component: str) -> int:
    """Cartesian axis (0=x, 1=y, 2=z) a component points along."""
    return AXIS[component[1]]


def component_offset(component: str, ndim: int) -> Tuple[float, ...]:
    table = _OFFSETS_1D if ndim == 1 else _OFFSETS_2D
    try:
        return table[component]
    except KeyError:
        raise ValueError(f"component '{component}' does not exist in {ndim}D") from None


def component_shape(component: str, cells: Sequence[int]) -> Tuple[int, ...]:
    """Array shape of a component on a domain of `cells` cells per axis."""
    offset = component_offset(component, len(cells))
    return tuple(n + 1 if o == 0.0 else n for n, o in zip(cells, offset))


def _axis_weights(coordinate: float, offset: float, size: int) -> List[Tuple[int, float]]:
    lattice = coordinate - offset
    nearest = round(lattice)
    if abs(lattice - nearest) < 1e-9:
        picks = [(int(nearest), 1.0)]
    else:
        lo = int(np.floor(lattice))
        picks = [(lo, 0.5), (lo + 1, 0.5)]
    for index, _ in picks:
        if index < 0 or index >= size:
            raise ValueError(f"position {coordinate} outside the {offset}-offset lattice")
    return picks


def interpolation_stencil(component: str, position: Sequence[float], cells: Sequence[int]) -> Stencil:
    """
    Samples and weights reproducing `component` at `position`.

    Args:
        component: Component name (e.g. "ez", "hx")
        position: Point in cell units, one coordinate per axis
        cells: Domain size in cells

    Returns:
        Tuple of (array index, weight) pairs; weights sum to 1
    """
    ndim = len(cells)
    offset = component_offset(component, ndim)
    shape = component_shape(component, cells)
    per_axis = [_axis_weights(position[k], offset[k], shape[k]) for k in range(ndim)]

    stencil: List[Tuple[Index, float]] = [((), 1.0)]
    for picks in per_axis:
        stencil = [(idx + (i,), w * wi) for idx, w in stencil for i, wi in picks]
    return tuple(stencil)


def stencil_vector(stencil: Stencil, shape: Tuple[int, ...]) -> np.ndarray:
    """Dense array holding the stencil weights."""
    out = np.zeros(shape)
    for index, weight in stencil:
        out[index] += weight
    return out
