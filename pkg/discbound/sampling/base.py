"""Base class for point-set samplers and the seeded stream factory."""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..pointset import PointSet

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SamplerSpec:
    """Which sampler to run, at what size, from which seed."""
    kind: str  # "mc" or "lhs"
    d: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise DomainError(f"need d >= 1 and n >= 1, got d={self.d}, n={self.n}")
        if not 0 <= self.seed <= _MAX_SEED:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for substream ``stream`` of ``seed``.

    Philox (a counter-based 64-bit generator) keyed by
    SeedSequence(seed, spawn_key=(stream,)). Substreams are independent
    of the order they are created in, so replication i draws the same
    numbers whether or not replications run concurrently. Doubles come
    from Generator.random, which fills a 53-bit mantissa.
    """
    if stream < 0:
        raise DomainError(f"stream must be >= 0, got {stream}")
    sequence = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


class Sampler(ABC):
    """Abstract base class for sampling schemes."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier used on the command line."""
        pass

    @abstractmethod
    def draw(self, d: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """
        Draw an (n, d) array of points in [0,1)^d.

        Args:
            d: Dimension.
            n: Number of points.
            rng: Generator to draw from.

        Returns:
            Array of shape (n, d).
        """
        pass

    def sample(self, spec: SamplerSpec, stream: int = 0) -> PointSet:
        """Draw the point set determined by (spec, stream)."""
        if spec.kind != self.name:
            raise DomainError(f"{self.name} sampler cannot run a {spec.kind!r} spec")
        return PointSet(self.draw(spec.d, spec.n, make_rng(spec.seed, stream)))
