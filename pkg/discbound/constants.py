"""Numerical constants of the discrepancy bounds and their configuration file."""

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class BoundConstants:
    """Constants the probabilistic and bracketing bounds are stated with."""
    alpha: float  # exponent scale of the star-discrepancy tail bound
    beta: float  # exponent offset of the same bound
    inverse_sqrt_alpha: float  # printed rounding of 1/sqrt(alpha)
    weighted_offset: float  # beta + 1 + log(1 + 1/sqrt(2 pi)), printed
    mu: int  # chaining depth
    tau_mu: float
    bd_base: float  # base of the large-d factor max(bd_base^(d - threshold), 1)
    bd_threshold: int
    eta_scale: float  # eta(N, d) = eta_scale * e * ...
    lemma26_slope: float  # slope of the k_max <= 1 + ceil(slope * d) bound
    discrepancy_constant: float = 2.4968  # C in D* <= C sqrt(d/N) for some N-point set


def get_default_constants_path() -> Path:
    """Get the path to the packaged constants file."""
    return Path(__file__).parent / "data" / "constants.json"


def load_constants(config_path: Path | None = None) -> BoundConstants:
    """Load bound constants from a JSON file.

    Args:
        config_path: Path to the JSON file. If None, uses the packaged
                     data file.

    Returns:
        A BoundConstants instance.

    Raises:
        FileNotFoundError: If the file doesn't exist.
        json.JSONDecodeError: If the file is invalid JSON.
        KeyError: If a required key is missing.
    """
    if config_path is None:
        config_path = get_default_constants_path()

    with open(config_path, "r") as f:
        data = json.load(f)

    return BoundConstants(
        alpha=float(data["alpha"]),
        beta=float(data["beta"]),
        inverse_sqrt_alpha=float(data["inverse_sqrt_alpha"]),
        weighted_offset=float(data["weighted_offset"]),
        mu=int(data["mu"]),
        tau_mu=float(data["tau_mu"]),
        bd_base=float(data.get("bd_base", 1.1)),
        bd_threshold=int(data.get("bd_threshold", 101)),
        eta_scale=float(data.get("eta_scale", 3.3)),
        lemma26_slope=float(data.get("lemma26_slope", 0.0544)),
        discrepancy_constant=float(data.get("discrepancy_constant", 2.4968)),
    )


_constants: BoundConstants | None = None


def get_constants() -> BoundConstants:
    """Return the packaged constants, loading them on first use."""
    global _constants
    if _constants is None:
        _constants = load_constants()
    return _constants
