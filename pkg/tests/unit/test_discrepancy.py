"""Unit tests for the discrepancy module."""

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discbound.cover import build_cover_nd
from discbound.discrepancy import (
    local_disc,
    local_discs,
    oracle_size,
    star_disc_1d_sorted,
    star_disc_exact,
    star_disc_upper_cover,
    weighted_star_disc,
)
from discbound.errors import DimensionMismatchError, DomainError, InfeasibleSizeError
from discbound.pointset import PointSet, WeightScheme, read_weights_csv
from discbound.settings import set_oracle_cap


@pytest.mark.unit
@pytest.mark.discrepancy
class TestLocalDiscrepancy:
    """Tests for the local discrepancy of a single box."""

    def test_half_open_count(self, midpoints_4):
        """Test that a point on the box edge is not counted."""
        # [0, 0.375) holds only 1/8
        assert local_disc(midpoints_4, [0.375]) == pytest.approx(0.125)

    def test_full_box(self, midpoints_4):
        """Test that the unit box has zero local discrepancy."""
        assert local_disc(midpoints_4, [1.0]) == 0.0

    def test_origin(self, center_point):
        """Test the empty box at the origin."""
        assert local_disc(center_point, [0.0, 0.0]) == 0.0

    def test_vectorized_matches_scalar(self, random_points):
        """Test local_discs against local_disc row by row."""
        points = random_points(30, 3, seed=4)
        corners = np.random.default_rng(9).random((2500, 3))
        values = local_discs(points, corners)
        for i in (0, 1023, 1024, 2499):
            assert values[i] == pytest.approx(local_disc(points, corners[i]))

    def test_dimension_mismatch(self, center_point):
        """Test that a corner of the wrong length is rejected."""
        with pytest.raises(DimensionMismatchError):
            local_disc(center_point, [0.5])

    def test_corner_outside_cube(self, center_point):
        """Test that corners must lie in the unit cube."""
        with pytest.raises(DomainError):
            local_disc(center_point, [0.5, 1.5])


@pytest.mark.unit
@pytest.mark.discrepancy
class TestExactOracle:
    """Tests for the exact star-discrepancy."""

    def test_midpoint_set(self, midpoints_4):
        """Test that {1/8, 3/8, 5/8, 7/8} has D* = 1/8."""
        result = star_disc_exact(midpoints_4)
        assert result.value == pytest.approx(0.125)
        assert result.kind == "exact"

    def test_single_center_point(self, center_point):
        """Test that the closed box at the point itself attains 3/4."""
        result = star_disc_exact(center_point)
        assert result.value == pytest.approx(0.75)
        assert result.witness == (0.5, 0.5)
        assert result.count_rule == "closed"

    def test_single_point_at_origin(self):
        """Test that a point at 0 gives D* = 1."""
        assert star_disc_exact(PointSet(np.array([[0.0, 0.0]]))).value == pytest.approx(1.0)

    def test_open_deficiency(self):
        """Test a set whose supremum comes from an almost empty large box."""
        points = PointSet(np.array([[0.9], [0.95]]))
        result = star_disc_exact(points)
        assert result.value == pytest.approx(0.9)
        assert result.count_rule == "open"
        assert result.witness == (0.9,)

    def test_matches_sorted_formula_in_1d(self, random_points):
        """Test the oracle against the sorted-points formula on 100 sets."""
        for seed in range(100):
            points = random_points(1 + seed % 25, 1, seed=seed)
            assert star_disc_exact(points).value == pytest.approx(star_disc_1d_sorted(points), abs=1e-15)

    def test_value_in_unit_interval(self, random_points):
        """Test that D* lies in [1/(2N), 1]."""
        points = random_points(16, 2, seed=3)
        value = star_disc_exact(points).value
        assert 1 / 32 <= value <= 1.0

    def test_oracle_size(self, midpoints_4):
        """Test N times the grid size."""
        assert oracle_size(midpoints_4) == 4 * 5

    def test_cap(self, random_points):
        """Test that an oracle call above the cap is refused."""
        set_oracle_cap(10)
        with pytest.raises(InfeasibleSizeError):
            star_disc_exact(random_points(8, 2))

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 12), d=st.integers(1, 3))
    @settings(max_examples=30, deadline=None)
    def test_permutation_invariance(self, seed, n, d):
        """Test that reordering the points leaves D* unchanged."""
        rng = np.random.default_rng(seed)
        pts = rng.random((n, d))
        shuffled = pts[rng.permutation(n)]
        assert star_disc_exact(PointSet(pts)).value == star_disc_exact(PointSet(shuffled)).value

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10), d=st.integers(2, 3))
    @settings(max_examples=30, deadline=None)
    def test_coordinate_relabelling_invariance(self, seed, n, d):
        """Test that permuting the coordinate axes leaves D* unchanged."""
        rng = np.random.default_rng(seed)
        pts = rng.random((n, d))
        relabelled = pts[:, rng.permutation(d)]
        original = star_disc_exact(PointSet(pts)).value
        assert star_disc_exact(PointSet(relabelled)).value == pytest.approx(original, abs=1e-12)

    def test_1d_formula_needs_d1(self, center_point):
        """Test that the sorted formula is one-dimensional."""
        with pytest.raises(DimensionMismatchError):
            star_disc_1d_sorted(center_point)


@pytest.mark.unit
@pytest.mark.discrepancy
class TestCoverBound:
    """Tests for the delta-cover sandwich."""

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("delta", [0.2, 0.1])
    def test_sandwich(self, random_points, d, delta):
        """Test lower <= exact <= upper <= lower + delta."""
        cover = build_cover_nd(d, delta).delta_cover()
        for seed, n in enumerate((1, 2, 3, 5, 8, 13, 17, 24, 32)):
            points = random_points(n, d, seed=seed)
            exact = star_disc_exact(points).value
            bound = star_disc_upper_cover(points, cover)
            assert bound.lower.value <= exact + 1e-12
            assert exact <= bound.upper.value + 1e-12
            assert bound.upper.value <= bound.lower.value + delta + 1e-12

    def test_kinds(self, midpoints_4, cover_1d_quarter):
        """Test the kinds and the shared witness."""
        bound = star_disc_upper_cover(midpoints_4, cover_1d_quarter.points)
        assert bound.lower.kind == "cover-lower"
        assert bound.upper.kind == "cover-upper"
        assert bound.lower.witness == bound.upper.witness

    def test_upper_clamped_to_one(self):
        """Test that the upper value never exceeds 1."""
        points = PointSet(np.array([[0.0]]))
        cover = build_cover_nd(1, 0.5).delta_cover()
        assert star_disc_upper_cover(points, cover).upper.value == 1.0

    def test_dimension_mismatch(self, center_point, cover_1d_quarter):
        """Test that a cover of the wrong dimension is rejected."""
        with pytest.raises(DimensionMismatchError):
            star_disc_upper_cover(center_point, cover_1d_quarter.points)


@pytest.mark.unit
@pytest.mark.discrepancy
class TestWeighted:
    """Tests for the weighted star-discrepancy."""

    def test_center_point_product_weights(self, center_point):
        """Test that unit product weights pick the full set at 3/4."""
        result = weighted_star_disc(center_point, WeightScheme.from_product([1.0, 1.0]))
        assert result.value == pytest.approx(0.75)
        assert result.subset == (1, 2)
        assert result.per_subset[1] == pytest.approx(0.5)

    def test_full_set_only_is_plain_discrepancy(self, random_points):
        """Test that gamma = 1 on the full set reproduces D*."""
        points = random_points(10, 3, seed=2)
        result = weighted_star_disc(points, WeightScheme.full_set_only(3))
        assert result.value == pytest.approx(star_disc_exact(points).value)
        assert result.subset == (1, 2, 3)

    def test_small_weight_moves_maximum(self, center_point):
        """Test that shrinking gamma on the full set moves the maximizer."""
        weights = WeightScheme(2, {0b01: 1.0, 0b10: 0.2, 0b11: 0.1})
        result = weighted_star_disc(center_point, weights)
        assert result.value == pytest.approx(0.5)
        assert result.subset == (1,)

    def test_cover_mode_is_upper_bound(self, random_points):
        """Test that the cover mode bounds the exact weighted value from above."""
        points = random_points(12, 2, seed=6)
        weights = WeightScheme.from_product([0.9, 0.5])
        exact = weighted_star_disc(points, weights)
        upper = weighted_star_disc(points, weights, mode=0.1)
        assert upper.mode == "cover(0.1)"
        assert exact.value <= upper.value + 1e-12

    def test_weights_file(self, center_point):
        """Test weights read from a bitmask file."""
        weights = read_weights_csv(io.StringIO("# mask,gamma\n0b11,1.0\n1,0.5\n"), d=2)
        assert weighted_star_disc(center_point, weights).value == pytest.approx(0.75)

    def test_dimension_mismatch(self, center_point):
        """Test that weights for another dimension are rejected."""
        with pytest.raises(DimensionMismatchError):
            weighted_star_disc(center_point, WeightScheme.full_set_only(3))
