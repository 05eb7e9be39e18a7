"""Jittered Latin hypercube sampling."""

import numpy as np

from .base import Sampler


def stratum_bounds(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Float bounds k/n and (k+1)/n of the n one-dimensional strata."""
    k = np.arange(n, dtype=float)
    return k / n, (k + 1) / n


class LatinHypercubeSampler(Sampler):
    """Each coordinate puts exactly one point in every stratum [k/n, (k+1)/n).

    Coordinate j of point i is (pi_j(i) + U_ij)/n for independent uniform
    permutations pi_j and uniform jitter U_ij.
    """

    @property
    def name(self) -> str:
        return "lhs"

    def draw(self, d: int, n: int, rng: np.random.Generator) -> np.ndarray:
        lower, upper = stratum_bounds(n)
        points = np.empty((n, d))
        for j in range(d):
            strata = rng.permutation(n)
            jitter = rng.random(n)
            lo, hi = lower[strata], upper[strata]
            x = lo + jitter * (hi - lo)
            # rounding may land exactly on the upper edge
            points[:, j] = np.where(x >= hi, np.nextafter(hi, 0.0), x)
        return points


def is_stratified(points: np.ndarray) -> bool:
    """True if every coordinate hits every stratum exactly once."""
    n = points.shape[0]
    lower, upper = stratum_bounds(n)
    for j in range(points.shape[1]):
        column = np.sort(points[:, j])
        if not np.all((column >= lower) & (column < upper)):
            return False
    return True
