"""Unit tests for the settings module."""

import pytest

from discbound import settings


@pytest.mark.unit
@pytest.mark.settings
class TestSettings:
    """Tests for the module-level caps."""

    def test_defaults(self):
        """Test the default values."""
        assert settings.get_oracle_cap() == settings.DEFAULT_ORACLE_CAP
        assert settings.get_cover_cap() == settings.DEFAULT_COVER_CAP
        assert settings.get_grid_cap() == settings.DEFAULT_GRID_CAP
        assert settings.get_workers() == 1

    def test_setters(self):
        """Test that setters change the getters."""
        settings.set_oracle_cap(5)
        settings.set_cover_cap(6)
        settings.set_grid_cap(7)
        settings.set_workers(8)
        assert (settings.get_oracle_cap(), settings.get_cover_cap(),
                settings.get_grid_cap(), settings.get_workers()) == (5, 6, 7, 8)

    def test_reset(self):
        """Test that reset_settings restores the defaults."""
        settings.set_workers(4)
        settings.reset_settings()
        assert settings.get_workers() == settings.DEFAULT_WORKERS

    @pytest.mark.parametrize("setter", [
        settings.set_oracle_cap, settings.set_cover_cap, settings.set_grid_cap, settings.set_workers,
    ])
    def test_rejects_zero(self, setter):
        """Test that every cap must be at least 1."""
        with pytest.raises(ValueError):
            setter(0)
