"""Monte Carlo sampling: i.i.d. uniform points."""

import numpy as np

from .base import Sampler


class MonteCarloSampler(Sampler):
    """N independent uniform points in [0,1)^d."""

    @property
    def name(self) -> str:
        return "mc"

    def draw(self, d: int, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.random((n, d))
