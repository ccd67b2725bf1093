"""Geometry, staggering and contour models."""

from .geometry import (
    Block,
    Geometry,
    GeometryKind,
    StressSurface,
    SurfacePoint,
    build_custom_rectangles_2d,
    build_parallel_plates_1d,
    build_piston_2d,
    empty_domain,
    scale_geometry,
)
from .mask import PECMask, check_surface, rasterize
from .specs import ContourSpec, TemperatureSpec
from .staggering import (
    FieldType,
    Polarization,
    all_components,
    component_axis,
    component_shape,
    components,
    field_type_of,
    interpolation_stencil,
)

__all__ = [
    "Block",
    "Geometry",
    "GeometryKind",
    "StressSurface",
    "SurfacePoint",
    "build_custom_rectangles_2d",
    "build_parallel_plates_1d",
    "build_piston_2d",
    "empty_domain",
    "scale_geometry",
    "PECMask",
    "check_surface",
    "rasterize",
    "ContourSpec",
    "TemperatureSpec",
    "FieldType",
    "Polarization",
    "all_components",
    "component_axis",
    "component_shape",
    "components",
    "field_type_of",
    "interpolation_stencil",
]
