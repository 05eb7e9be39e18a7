"""Shared pytest fixtures for discbound tests."""

import numpy as np
import pytest

from discbound.cover import build_cover_1d, build_cover_2d, write_cover_csv
from discbound.pointset import PointSet, midpoint_set, write_points_csv


# ============================================================================
# Global state
# ============================================================================


@pytest.fixture(autouse=True)
def reset_discbound_state():
    """Restore default caps and the packaged constants around every test."""
    import discbound.constants as constants_module
    import discbound.settings as settings_module

    original_constants = constants_module._constants
    settings_module.reset_settings()
    constants_module._constants = None

    yield

    settings_module.reset_settings()
    constants_module._constants = original_constants


# ============================================================================
# Point sets
# ============================================================================


@pytest.fixture
def midpoints_4() -> PointSet:
    """The 1-d set {1/8, 3/8, 5/8, 7/8}, with D* = 1/8."""
    return midpoint_set(4)


@pytest.fixture
def center_point() -> PointSet:
    """A single point at the center of the unit square."""
    return PointSet(np.array([[0.5, 0.5]]))


@pytest.fixture
def random_points():
    """Factory for seeded uniform point sets."""
    def make(n: int, d: int, seed: int = 0) -> PointSet:
        rng = np.random.default_rng(seed)
        return PointSet(rng.random((n, d)))
    return make


# ============================================================================
# Covers
# ============================================================================


@pytest.fixture
def cover_1d_quarter():
    return build_cover_1d(0.25)


@pytest.fixture
def cover_2d_half():
    """The planar cover at delta = 0.5 (six brackets)."""
    return build_cover_2d(0.5)


# ============================================================================
# Files
# ============================================================================


@pytest.fixture
def points_file(tmp_path):
    """Write a point set to a CSV file and return its path."""
    def write(point_set: PointSet, name: str = "points.csv"):
        path = tmp_path / name
        with open(path, "w", newline="") as f:
            write_points_csv(point_set, f)
        return path
    return write


@pytest.fixture
def cover_file(tmp_path, cover_2d_half):
    """The delta = 0.5 planar cover written to a CSV file."""
    path = tmp_path / "cover.csv"
    with open(path, "w", newline="") as f:
        write_cover_csv(cover_2d_half.brackets, f)
    return path
