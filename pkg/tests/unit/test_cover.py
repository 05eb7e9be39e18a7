"""Unit tests for the cover module."""

import io
import math

import numpy as np
import pytest

from discbound.bounds import bound_d2
from discbound.cover import (
    Bracket,
    BracketingCover,
    build_cover_1d,
    build_cover_2d,
    build_cover_nd,
    corner_grid,
    cover_to_delta_cover,
    find_uncovered,
    layer_count_2d,
    layers_2d,
    read_cover_csv,
    validate_cover,
    write_cover_csv,
    write_delta_cover_csv,
)
from discbound.errors import DomainError, FileFormatError, InfeasibleSizeError
from discbound.settings import set_cover_cap


@pytest.mark.unit
@pytest.mark.cover
class TestBracket:
    """Tests for the Bracket type."""

    def test_weight(self):
        """Test that the weight is the difference of corner volumes."""
        b = Bracket((0.5, 0.5), (1.0, 1.0))
        assert b.weight == pytest.approx(0.75)

    def test_contains_closed(self):
        """Test that brackets are closed boxes."""
        b = Bracket((0.25,), (0.5,))
        assert b.contains((0.25,))
        assert b.contains((0.5,))
        assert not b.contains((0.51,))

    def test_rejects_inverted_corners(self):
        """Test that lower must lie below upper."""
        with pytest.raises(DomainError):
            Bracket((0.6, 0.1), (0.5, 1.0))


@pytest.mark.unit
@pytest.mark.cover
class TestCover1D:
    """Tests for the one-dimensional cover."""

    def test_quarter(self, cover_1d_quarter):
        """Test the four brackets at delta = 1/4."""
        brackets, points = cover_1d_quarter
        assert len(brackets) == 4
        assert brackets.brackets[0] == Bracket((0.0,), (0.25,))
        assert points.points == [(0.25,), (0.5,), (0.75,), (1.0,)]

    def test_count_is_ceiling(self):
        """Test that the count equals ceil(1/delta) exactly."""
        for delta in (0.5, 0.3, 0.25, 0.1, 0.07):
            assert len(build_cover_1d(delta).brackets) == math.ceil(1 / delta - 1e-12)

    def test_delta_one(self):
        """Test the single bracket at delta = 1."""
        assert len(build_cover_1d(1.0).brackets) == 1


@pytest.mark.unit
@pytest.mark.cover
class TestCover2D:
    """Tests for the planar construction."""

    def test_half(self, cover_2d_half):
        """Test that delta = 0.5 gives 5 + 1 brackets."""
        brackets, _ = cover_2d_half
        assert len(brackets) == 6
        assert [layer.count for layer in layers_2d(0.5)] == [5, 1]

    def test_layer_count(self):
        """Test the certified per-layer count at delta = 0.5."""
        assert layer_count_2d(0.5) == 5

    def test_layers_respect_certified_count(self):
        """Test that every layer stays within 2 f(delta_q) - 1 brackets."""
        for delta in (0.3, 0.1, 0.05):
            for layer in layers_2d(delta)[:-1]:
                assert layer.count <= layer_count_2d(min(layer.delta_q, 0.999999))

    def test_symmetric(self, cover_2d_half):
        """Test that the planar cover is symmetric in its coordinates."""
        brackets = set(cover_2d_half.brackets.brackets)
        mirrored = {Bracket(b.lower[::-1], b.upper[::-1]) for b in brackets}
        assert brackets == mirrored

    @pytest.mark.parametrize("delta", [0.5, 0.3, 0.1, 0.05])
    def test_valid_and_within_bound(self, delta):
        """Test weights, coverage and cardinality against the planar bound."""
        cover = build_cover_2d(delta).brackets
        result = validate_cover(cover, n_random=100_000, seed=0)
        assert result.passed, result.witness
        assert result.max_weight <= delta + 1e-12
        assert len(cover) <= bound_d2(delta)

    def test_count_nonincreasing_in_delta(self):
        """Test that a larger tolerance never needs more planar brackets."""
        deltas = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5]
        counts = [len(build_cover_2d(delta).brackets) for delta in deltas]
        assert counts == sorted(counts, reverse=True)
        assert counts[-2:] == [20, 6]

    @pytest.mark.parametrize("delta", [0.3, 0.07, 0.045])
    def test_light_brackets_are_closing_ones(self, delta):
        """Test that only the two closing brackets of each layer and the final box weigh less than delta."""
        cover = build_cover_2d(delta).brackets
        light = [b for b in cover.brackets if abs(b.weight - delta) > 1e-12]
        assert len(light) == 2 * (len(layers_2d(delta)) - 1) + 1
        assert all(b.weight < delta for b in light)
        assert all(b.lower == (0.0, 0.0) for b in light)

    @pytest.mark.parametrize("delta", [0.5, 0.1])
    def test_light_brackets_bounded_when_final_box_is_full(self, delta):
        """Test the light-bracket count when 1/delta is an integer."""
        cover = build_cover_2d(delta).brackets
        light = [b for b in cover.brackets if abs(b.weight - delta) > 1e-12]
        assert len(light) <= 2 * (len(layers_2d(delta)) - 1) + 1

    @pytest.mark.slow
    def test_valid_at_one_percent(self):
        """Test the planar cover at delta = 0.01."""
        cover = build_cover_2d(0.01).brackets
        assert validate_cover(cover, n_random=100_000, seed=0).passed
        assert len(cover) <= bound_d2(0.01)


@pytest.mark.unit
@pytest.mark.cover
class TestCoverND:
    """Tests for covers in general dimension."""

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("delta", [0.5, 0.25, 0.1])
    def test_valid(self, d, delta):
        """Test that the construction validates for small d."""
        cover = build_cover_nd(d, delta)
        result = validate_cover(cover, n_random=20_000, seed=1)
        assert result.passed, (result.heavy_brackets[:5], result.witness)

    @pytest.mark.slow
    @pytest.mark.parametrize("delta", [0.5, 0.25, 0.1])
    def test_valid_d4(self, delta):
        """Test the four-dimensional construction."""
        cover = build_cover_nd(4, delta)
        assert validate_cover(cover, n_random=20_000, seed=1).passed

    def test_d1_count_exact(self):
        """Test that d = 1 has exactly ceil(1/delta) brackets."""
        assert len(build_cover_nd(1, 0.1)) == 10
        assert len(build_cover_nd(1, 0.25)) == 4

    def test_brackets_distinct(self):
        """Test that overlapping slabs do not repeat brackets."""
        cover = build_cover_nd(3, 0.25)
        assert len(set(cover.brackets)) == len(cover)

    def test_cap(self):
        """Test that a cover above the cap is refused."""
        set_cover_cap(100)
        with pytest.raises(InfeasibleSizeError):
            build_cover_nd(3, 0.1)

    def test_invalid_arguments(self):
        """Test domain errors."""
        with pytest.raises(DomainError):
            build_cover_nd(0, 0.5)
        with pytest.raises(DomainError):
            build_cover_nd(2, 1.5)


@pytest.mark.unit
@pytest.mark.cover
class TestValidation:
    """Tests for cover validation."""

    def test_missing_bracket_detected(self, cover_2d_half):
        """Test that dropping the central box leaves points uncovered."""
        full = cover_2d_half.brackets
        broken = BracketingCover(2, 0.5, full.brackets[:-1])
        result = validate_cover(broken, n_random=10_000, seed=0)
        assert not result.coverage_ok
        witness = result.witness
        assert max(witness) <= math.sqrt(0.5) + 1e-12

    def test_heavy_bracket_detected(self):
        """Test that a bracket heavier than delta is flagged."""
        cover = BracketingCover(1, 0.25, [Bracket((0.0,), (0.5,)), Bracket((0.5,), (1.0,))])
        result = validate_cover(cover, n_random=100, seed=0)
        assert result.heavy_brackets == [0, 1]
        assert result.coverage_ok
        assert not result.passed

    def test_find_uncovered(self):
        """Test the uncovered mask on explicit points."""
        cover = BracketingCover(1, 0.5, [Bracket((0.0,), (0.5,))])
        mask = find_uncovered(cover, np.array([[0.25], [0.5], [0.75]]))
        assert mask.tolist() == [False, False, True]

    def test_corner_grid_thinned(self):
        """Test that the corner grid respects its cap."""
        lower = np.zeros((50, 2))
        upper = np.column_stack([np.linspace(0.02, 1, 50), np.linspace(0.02, 1, 50)])
        assert corner_grid(lower, upper, 10_000).shape == (51 * 51, 2)
        assert corner_grid(lower, upper, 100).shape[0] <= 100


@pytest.mark.unit
@pytest.mark.cover
class TestDeltaCover:
    """Tests for the induced delta-cover."""

    def test_origin_excluded(self, cover_2d_half):
        """Test that the origin is implicit."""
        points = cover_to_delta_cover(cover_2d_half.brackets)
        assert (0.0, 0.0) not in points.points
        assert (1.0, 1.0) in points.points
        assert points.points == sorted(points.points)

    def test_sandwich_property(self, cover_2d_half):
        """Test that every bracket gives a sandwich x <= y <= z from the cover points or 0."""
        points = set(cover_2d_half.points.points) | {(0.0, 0.0)}
        for b in cover_2d_half.brackets.brackets:
            assert b.lower in points and b.upper in points


@pytest.mark.unit
@pytest.mark.cover
class TestCoverFiles:
    """Tests for the cover CSV format."""

    def test_header(self, cover_2d_half):
        """Test the two header rows."""
        out = io.StringIO()
        write_cover_csv(cover_2d_half.brackets, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "d,delta,count"
        assert lines[1] == "2,0.5,6"
        assert len(lines) == 8

    def test_read_back(self, cover_file, cover_2d_half):
        """Test that a written cover reads back bracket for bracket."""
        cover = read_cover_csv(cover_file)
        assert cover.brackets == cover_2d_half.brackets.brackets
        assert cover.delta == 0.5

    def test_count_mismatch(self):
        """Test that a wrong count in the header is rejected."""
        text = "d,delta,count\n1,0.5,3\n0.0,0.5\n0.5,1.0\n"
        with pytest.raises(FileFormatError):
            read_cover_csv(io.StringIO(text))

    def test_bad_header(self):
        """Test that a missing header is rejected."""
        with pytest.raises(FileFormatError):
            read_cover_csv(io.StringIO("0.0,0.5\n"))

    def test_wrong_width(self):
        """Test that rows must hold 2d values."""
        with pytest.raises(FileFormatError):
            read_cover_csv(io.StringIO("d,delta,count\n2,0.5,1\n0.0,0.5\n"))

    def test_delta_cover_csv(self, cover_1d_quarter):
        """Test one point per row."""
        out = io.StringIO()
        write_delta_cover_csv(cover_1d_quarter.points, out)
        assert out.getvalue() == "0.25\n0.5\n0.75\n1.0\n"
