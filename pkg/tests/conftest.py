"""Shared fixtures for the test suite."""

import pytest

from core.model.geometry import build_parallel_plates_1d, build_piston_2d
from core.model.mask import rasterize


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full time-domain force runs (deselect with -m 'not slow')")


@pytest.fixture
def plates_small():
    """Short 1D cavity: gap 8, pad 6."""
    return build_parallel_plates_1d(8, wall_thickness=2, pad=6)


@pytest.fixture
def plates_small_mask(plates_small):
    return rasterize(plates_small)


@pytest.fixture
def piston_small():
    """Smallest valid piston with sidewalls."""
    return build_piston_2d(s=8, a=4, d=12, pad=4, wall_thickness=2)


@pytest.fixture
def piston_small_mask(piston_small):
    return rasterize(piston_small)
