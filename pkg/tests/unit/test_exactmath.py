"""Unit tests for the exactmath module."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discbound.errors import DomainError
from discbound.exactmath import (
    FaulhaberTriple,
    bernoulli,
    f_r,
    f_r_minimizer,
    falling_factorial,
    faulhaber_closed,
    gfi_rhs,
    parse_r_grid,
    power_sum,
    power_sum_float,
    verify_gfi,
)


@pytest.mark.unit
@pytest.mark.exactmath
class TestBernoulli:
    """Tests for exact Bernoulli numbers."""

    def test_first_values(self):
        """Test the first Bernoulli numbers under B_1 = -1/2."""
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)
        assert bernoulli(6) == Fraction(1, 42)

    def test_b12(self):
        """Test that B_12 = -691/2730."""
        assert bernoulli(12) == Fraction(-691, 2730)

    def test_odd_values_vanish(self):
        """Test that odd Bernoulli numbers beyond B_1 are zero."""
        assert all(bernoulli(k) == 0 for k in range(3, 40, 2))

    def test_negative_index(self):
        """Test that a negative index is rejected."""
        with pytest.raises(DomainError):
            bernoulli(-1)


@pytest.mark.unit
@pytest.mark.exactmath
class TestPowerSums:
    """Tests for direct and closed-form power sums."""

    def test_sum_of_squares(self):
        """Test the sum of squares up to 10."""
        assert power_sum(10, 2) == 385

    def test_shifted_sum(self):
        """Test a shifted sum with a rational shift."""
        assert power_sum(2, 2, Fraction(1, 2)) == Fraction(9, 4) + Fraction(25, 4)

    def test_float_shift_read_as_decimal(self):
        """Test that a float shift is taken at its decimal value."""
        assert power_sum(3, 1, 0.1) == power_sum(3, 1, Fraction(1, 10))

    def test_float_path_matches_exact(self):
        """Test the float approximation against the exact sum."""
        assert power_sum_float(20, 5, 0.25) == pytest.approx(float(power_sum(20, 5, Fraction(1, 4))), rel=1e-14)

    def test_falling_factorial(self):
        """Test falling factorials including the empty product."""
        assert falling_factorial(5, 0) == 1
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(5, 5) == 120
        assert falling_factorial(3, 4) == 0

    @given(n=st.integers(1, 40), j=st.integers(1, 15))
    @settings(max_examples=60, deadline=None)
    def test_closed_form_matches_direct_sum(self, n, j):
        """Test that Faulhaber's formula reproduces the direct sum."""
        assert faulhaber_closed(n, j) == power_sum(n, j)


@pytest.mark.unit
@pytest.mark.exactmath
class TestShiftedInequality:
    """Tests for the shifted Faulhaber inequality."""

    def test_equality_for_squares(self):
        """Test that sum i^2 meets the right-hand side exactly at r = 0."""
        for n in range(1, 30):
            assert power_sum(n, 2) == gfi_rhs(n, 2)

    def test_strict_for_linear(self):
        """Test that j = 1 at r = 0 leaves a gap of exactly 1/12."""
        assert gfi_rhs(7, 1) - power_sum(7, 1) == Fraction(1, 12)

    def test_f_r_at_least_one(self):
        """Test that the single-term factor f_r(j) is at least 1."""
        for j in range(1, 30):
            for r in (0, Fraction(1, 3), Fraction(1, 2), 1):
                assert f_r(j, r) >= 1

    def test_f_r_equality_cases(self):
        """Test that f_0(2) = f_0(3) = 1."""
        assert f_r(2, 0) == 1
        assert f_r(3, 0) == 1

    def test_minimizer(self):
        """Test the real minimizer of the single-term factor."""
        assert f_r_minimizer(0) == pytest.approx(math.sqrt(12) - 1)
        assert f_r_minimizer(1) == pytest.approx(2 * math.sqrt(12) - 1)

    def test_verify_small_grid(self):
        """Test the exhaustive check on the default grid."""
        report = verify_gfi(50, 20, parse_r_grid("step:1/8"))
        assert report.passed
        assert report.checked == 50 * 20 * 9
        assert FaulhaberTriple(7, 2, Fraction(0)) in report.equality_cases
        assert all(t.r == 0 for t in report.equality_cases)

    def test_rejects_bad_bounds(self):
        """Test that n_max = 0 is rejected."""
        with pytest.raises(DomainError):
            verify_gfi(0, 5, [0])

    def test_rejects_shift_outside_unit_interval(self):
        """Test that a shift above 1 is rejected."""
        with pytest.raises(DomainError):
            verify_gfi(5, 5, [Fraction(3, 2)])

    @given(
        n=st.integers(1, 60),
        j=st.integers(1, 25),
        r=st.fractions(min_value=0, max_value=1, max_denominator=50),
    )
    @settings(max_examples=80, deadline=None)
    def test_inequality_holds(self, n, j, r):
        """Test the inequality at random rational triples."""
        assert power_sum(n, j, r) <= gfi_rhs(n, j, r)

    @given(
        n=st.integers(1, 80),
        j=st.integers(1, 25),
        r=st.fractions(min_value=0, max_value=1, max_denominator=50),
    )
    @settings(max_examples=80, deadline=None)
    def test_rhs_nondecreasing_in_n(self, n, j, r):
        """Test that the right-hand side grows with n at fixed j and r."""
        assert gfi_rhs(n, j, r) <= gfi_rhs(n + 1, j, r)


@pytest.mark.unit
@pytest.mark.exactmath
class TestParseGrid:
    """Tests for shift grid parsing."""

    def test_step(self):
        """Test that a step grid runs from 0 to 1 inclusive."""
        grid = parse_r_grid("step:1/4")
        assert grid == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]

    def test_step_not_dividing_one(self):
        """Test that 1 is appended when the step does not divide it."""
        assert parse_r_grid("step:2/5")[-1] == 1

    def test_list(self):
        """Test an explicit list."""
        assert parse_r_grid("0, 1/3, 1") == [0, Fraction(1, 3), 1]

    def test_invalid(self):
        """Test that garbage is rejected."""
        with pytest.raises(DomainError):
            parse_r_grid("a,b")
        with pytest.raises(DomainError):
            parse_r_grid("")
