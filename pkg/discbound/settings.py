"""Runtime caps and toggles shared by the library and the CLI."""

# Corner-point evaluations allowed in the exact discrepancy oracle
DEFAULT_ORACLE_CAP = 20_000_000

# Brackets allowed in a general-d cover
DEFAULT_COVER_CAP = 2_000_000

# Deterministic grid points used when validating a cover
DEFAULT_GRID_CAP = 50_000

DEFAULT_WORKERS = 1

_oracle_cap: int = DEFAULT_ORACLE_CAP
_cover_cap: int = DEFAULT_COVER_CAP
_grid_cap: int = DEFAULT_GRID_CAP
_workers: int = DEFAULT_WORKERS


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def set_oracle_cap(cap: int) -> None:
    """Set the corner-evaluation cap of the exact oracle."""
    global _oracle_cap
    _oracle_cap = _positive("oracle cap", cap)


def get_oracle_cap() -> int:
    return _oracle_cap


def set_cover_cap(cap: int) -> None:
    """Set the maximum number of brackets a general-d cover may hold."""
    global _cover_cap
    _cover_cap = _positive("cover cap", cap)


def get_cover_cap() -> int:
    return _cover_cap


def set_grid_cap(cap: int) -> None:
    """Set the size of the deterministic grid used by cover validation."""
    global _grid_cap
    _grid_cap = _positive("grid cap", cap)


def get_grid_cap() -> int:
    return _grid_cap


def set_workers(workers: int) -> None:
    """Set the thread count for replications and validation chunks."""
    global _workers
    _workers = _positive("workers", workers)


def get_workers() -> int:
    return _workers


def reset_settings() -> None:
    """Restore every setting to its default."""
    global _oracle_cap, _cover_cap, _grid_cap, _workers
    _oracle_cap = DEFAULT_ORACLE_CAP
    _cover_cap = DEFAULT_COVER_CAP
    _grid_cap = DEFAULT_GRID_CAP
    _workers = DEFAULT_WORKERS
