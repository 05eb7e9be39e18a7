"""Seeded samplers: Monte Carlo and Latin hypercube.

Every sampler draws from a Philox substream selected by (seed, stream),
see ``base.make_rng``.
"""

from ..errors import DomainError
from ..pointset import PointSet
from .base import Sampler, SamplerSpec, make_rng
from .latin_hypercube import LatinHypercubeSampler, is_stratified
from .monte_carlo import MonteCarloSampler

SAMPLERS: dict[str, Sampler] = {
    s.name: s for s in (MonteCarloSampler(), LatinHypercubeSampler())
}


def get_sampler(kind: str) -> Sampler:
    try:
        return SAMPLERS[kind]
    except KeyError:
        raise DomainError(f"unknown sampler {kind!r}; choose from {sorted(SAMPLERS)}") from None


def draw(spec: SamplerSpec, stream: int = 0) -> PointSet:
    """Sample with whichever sampler spec.kind names."""
    return get_sampler(spec.kind).sample(spec, stream)


def mc_sample(spec: SamplerSpec, stream: int = 0) -> PointSet:
    return SAMPLERS["mc"].sample(spec, stream)


def lhs_sample(spec: SamplerSpec, stream: int = 0) -> PointSet:
    return SAMPLERS["lhs"].sample(spec, stream)


def shuffle_exchangeable(point_set: PointSet, seed: int) -> PointSet:
    """Uniformly random reordering of the points (numpy's Fisher-Yates)."""
    order = make_rng(seed).permutation(point_set.n)
    return PointSet(point_set.points[order])


__all__ = [
    "LatinHypercubeSampler",
    "MonteCarloSampler",
    "SAMPLERS",
    "Sampler",
    "SamplerSpec",
    "draw",
    "get_sampler",
    "is_stratified",
    "lhs_sample",
    "make_rng",
    "mc_sample",
    "shuffle_exchangeable",
]
