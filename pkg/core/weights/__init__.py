"""Contour weights and their time-domain synthesis."""

from .contour import (
    omega_contour,
    pole_subtracted_limit,
    weight_naive,
    weight_pole_subtracted,
    weight_T0,
)
from .spectrum import (
    WeightKind,
    WeightSpectrum,
    WeightVariant,
    build_spectrum,
    magnetic_variant,
)
from .synthesis import (
    WeightFunction,
    augment_zero_mode,
    raised_cosine_taper,
    static_step_weight,
    synthesize_time_weight,
    weight_pair,
    window_contour,
)

__all__ = [
    "omega_contour",
    "pole_subtracted_limit",
    "weight_naive",
    "weight_pole_subtracted",
    "weight_T0",
    "WeightKind",
    "WeightSpectrum",
    "WeightVariant",
    "build_spectrum",
    "magnetic_variant",
    "WeightFunction",
    "augment_zero_mode",
    "raised_cosine_taper",
    "static_step_weight",
    "synthesize_time_weight",
    "weight_pair",
    "window_contour",
]
