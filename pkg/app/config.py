"""
Run configuration.

Flat text, one `section.key = value` entry per line, `#` starts a comment,
lists are comma separated and `inf` is accepted for geometry.d:

    geometry.kind = parallel_plates_1d
    geometry.a = 30, 40, 50
    physics.tau = 3.14159
    physics.sigma_a = 1
    outputs.methods = timedomain, lifshitz
"""

import itertools
import logging
import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.errors import ConfigError
from core.model.geometry import MIN_GAP, GeometryKind
from core.model.staggering import Polarization

logger = logging.getLogger(__name__)


class Method(str, Enum):
    TIMEDOMAIN = "timedomain"
    REFERENCE = "reference"
    LIFSHITZ = "lifshitz"
    NAIVE_CONTROL = "naive_control"


def _split(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GeometryConfig(_Section):
    """Layout and its sweep axes (a, d)."""
    kind: GeometryKind
    a: List[int] = Field(..., min_length=1, description="Gap sweep in cells")
    wall_thickness: int = Field(2, ge=2)
    pad: Optional[int] = Field(None, ge=4)
    s: int = Field(16, ge=8)
    d: List[float] = Field(default_factory=lambda: [math.inf], min_length=1)
    free_clearance: Optional[int] = Field(None, ge=4, description="Block-boundary distance along y for d = inf")

    @field_validator("a", "d", mode="before")
    @classmethod
    def _lists(cls, value):
        return _split(value)

    @field_validator("a")
    @classmethod
    def _resolved_gaps(cls, value: List[int]) -> List[int]:
        if any(a < MIN_GAP for a in value):
            raise ValueError(f"gap under-resolved: every a must be >= {MIN_GAP} cells")
        return value

    @model_validator(mode="after")
    def _sidewall_clearance(self) -> "GeometryConfig":
        if self.kind == GeometryKind.PISTON_2D:
            narrow = [d for d in self.d if math.isfinite(d) and d < self.s + MIN_GAP]
            if narrow:
                raise ValueError(
                    f"insufficient sidewall clearance: d={narrow[0]:g} < s + {MIN_GAP} = {self.s + MIN_GAP}"
                )
        return self

    @property
    def effective_pad(self) -> int:
        if self.pad is not None:
            return self.pad
        return 20 if self.kind == GeometryKind.PARALLEL_PLATES_1D else 16


class PhysicsConfig(_Section):
    tau: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    sigma: Optional[List[float]] = None
    sigma_a: Optional[List[float]] = None
    polarizations: List[Polarization] = Field(
        default_factory=lambda: [Polarization.TE, Polarization.TM], min_length=1
    )

    @field_validator("tau", "sigma", "sigma_a", "polarizations", mode="before")
    @classmethod
    def _lists(cls, value):
        return _split(value)

    @model_validator(mode="after")
    def _check_sigma(self) -> "PhysicsConfig":
        if self.sigma is not None and self.sigma_a is not None:
            raise ValueError("give physics.sigma or physics.sigma_a, not both")
        if any(t < 0.0 for t in self.tau):
            raise ValueError("tau must be nonnegative")
        rates = self.sigma if self.sigma is not None else (self.sigma_a or [1.0])
        if any(r < 0.0 for r in rates):
            raise ValueError("conductivity must be nonnegative")
        if any(t > 0.0 for t in self.tau) and any(r == 0.0 for r in rates):
            raise ValueError("zero-frequency contribution requires σ > 0")
        return self

    def sigma_values(self, a_cells: float) -> List[Tuple[float, float]]:
        """(sigma in grid units, sigma*a) pairs for a gap of a_cells."""
        if self.sigma is not None:
            return [(s, s * a_cells) for s in self.sigma]
        return [(sa / a_cells, sa) for sa in (self.sigma_a or [1.0])]


class NumericsConfig(_Section):
    resolution: List[int] = Field(default_factory=lambda: [1], min_length=1)
    courant: float = Field(0.5, gt=0.0, le=1.0)
    max_steps: int = Field(40000, ge=100)
    tail_tol: float = Field(1e-6, gt=0.0, lt=1.0)
    taper_fraction: float = Field(0.1, ge=0.0, lt=1.0)
    batch_size: int = Field(64, ge=1)

    @field_validator("resolution", mode="before")
    @classmethod
    def _lists(cls, value):
        return _split(value)

    @field_validator("resolution")
    @classmethod
    def _positive(cls, value: List[int]) -> List[int]:
        if any(r < 1 for r in value):
            raise ValueError("resolution factors must be >= 1")
        return value


class OutputsConfig(_Section):
    path: str = "results.csv"
    weights_path: str = "weights.csv"
    reference_path: str = "reference.csv"
    dump_dir: Optional[str] = None
    methods: List[Method] = Field(default_factory=lambda: [Method.TIMEDOMAIN], min_length=1)
    naive_zero_bin: float = 0.0

    @field_validator("methods", mode="before")
    @classmethod
    def _lists(cls, value):
        return _split(value)


class SweepPoint(BaseModel):
    """One (a, d, tau, sigma, resolution) combination."""

    model_config = ConfigDict(frozen=True)

    kind: GeometryKind
    a: int
    d: float
    tau: float
    sigma_a: float
    sigma: float
    resolution: int

    @property
    def a_cells(self) -> int:
        return self.a * self.resolution

    def sort_key(self) -> Tuple:
        return (self.a, self.d, self.tau, self.sigma_a, self.resolution)


class RunConfig(BaseModel):
    """Validated run configuration."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    geometry: GeometryConfig
    physics: PhysicsConfig = Field(default_factory=PhysicsConfig)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)

    @model_validator(mode="after")
    def _check_kind(self) -> "RunConfig":
        one_d = self.geometry.kind == GeometryKind.PARALLEL_PLATES_1D
        if one_d and self.numerics.courant > 1.0:
            raise ValueError("1D Courant factor must be <= 1")
        if not one_d and self.numerics.courant > 1.0 / math.sqrt(2.0):
            raise ValueError("2D Courant factor must be <= 1/sqrt(2)")
        if Method.LIFSHITZ in self.outputs.methods and not one_d:
            raise ValueError("the lifshitz method applies to parallel_plates_1d only")
        if self.geometry.kind == GeometryKind.CUSTOM_RECTANGLES_2D:
            raise ValueError("custom_rectangles_2d is available through the API only")
        return self

    @property
    def polarizations(self) -> List[Polarization]:
        if self.geometry.kind == GeometryKind.PARALLEL_PLATES_1D:
            return [Polarization.SCALAR_1D]
        return list(self.physics.polarizations)

    def sweep_points(self) -> List[SweepPoint]:
        """Every sweep combination in lexicographic order of the sweep axes."""
        d_values = [math.inf] if self.geometry.kind == GeometryKind.PARALLEL_PLATES_1D else self.geometry.d
        points = []
        for a, d, tau, res in itertools.product(self.geometry.a, d_values, self.physics.tau, self.numerics.resolution):
            for sigma, sigma_a in self.physics.sigma_values(a * res):
                points.append(
                    SweepPoint(kind=self.geometry.kind, a=a, d=d, tau=tau, sigma=sigma, sigma_a=sigma_a, resolution=res)
                )
        return sorted(points, key=SweepPoint.sort_key)


SECTIONS = {
    "geometry": GeometryConfig,
    "physics": PhysicsConfig,
    "numerics": NumericsConfig,
    "outputs": OutputsConfig,
}


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"] if not isinstance(p, int))
        message = item["msg"].removeprefix("Value error, ")
        parts.append(f"{location}: {message}" if location else message)
    return "; ".join(parts)


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a run configuration.

    Args:
        text: Configuration text

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Syntax errors and unknown keys carry their line number;
            validation errors name the violated precondition
    """
    raw: Dict[str, Dict[str, str]] = {name: {} for name in SECTIONS}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'section.key = value', got '{content}'", number)
        key, value = (part.strip() for part in content.split("=", 1))
        if "." not in key:
            raise ConfigError(f"key '{key}' has no section", number)
        section, name = key.split(".", 1)
        if section not in SECTIONS:
            raise ConfigError(f"unknown section '{section}'", number)
        if name not in SECTIONS[section].model_fields:
            raise ConfigError(f"unknown key '{key}'", number)
        if name in raw[section]:
            raise ConfigError(f"duplicate key '{key}'", number)
        if not value:
            raise ConfigError(f"empty value for '{key}'", number)
        raw[section][name] = value

    if not raw["geometry"]:
        raise ConfigError("missing geometry section")
    try:
        config = RunConfig(**{name: values for name, values in raw.items() if values or name == "geometry"})
    except ValidationError as e:
        raise ConfigError(_describe(e)) from None

    logger.info(
        f"parsed config: {config.geometry.kind.value}, {len(config.sweep_points())} sweep points, "
        f"methods {[m.value for m in config.outputs.methods]}"
    )
    return config
