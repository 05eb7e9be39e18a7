"""Star-discrepancy: exact oracle, cover-based bounds and weighted variant.

Boxes are anchored and half-open, [0, x): a point p counts when p_j < x_j
in every coordinate.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cover import DeltaCover, build_cover_nd
from .errors import DimensionMismatchError, DomainError, InfeasibleSizeError
from .pointset import PointSet, WeightScheme, mask_to_subset
from .settings import get_oracle_cap, get_workers

logger = logging.getLogger(__name__)

Kind = Literal["exact", "cover-upper", "cover-lower"]

# Cover points evaluated per block in local_discs
_BLOCK = 1024


@dataclass
class DiscrepancyResult:
    """A star-discrepancy value with the box corner that attains it."""
    value: float
    kind: Kind
    witness: tuple[float, ...] | None = None
    count_rule: str | None = None  # "closed" or "open" for exact results

    def __post_init__(self):
        self.value = min(1.0, max(0.0, float(self.value)))


@dataclass
class CoverBound:
    """Certified bracket lower <= D* <= upper from a delta-cover."""
    lower: DiscrepancyResult
    upper: DiscrepancyResult


@dataclass
class WeightedResult:
    """Weighted star-discrepancy and the subset that attains it."""
    value: float
    mode: str
    subset: tuple[int, ...] | None = None
    per_subset: dict[int, float] = field(default_factory=dict)


def local_disc(point_set: PointSet, x) -> float:
    """|#{p < x}/N - vol([0, x))| for a single corner x in [0,1]^d."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != point_set.d:
        raise DimensionMismatchError(f"corner has {x.shape[0]} coordinates, points have {point_set.d}")
    if np.any((x < 0.0) | (x > 1.0)):
        raise DomainError(f"corner {tuple(x)} lies outside [0,1]^d")
    count = int(np.all(point_set.points < x, axis=1).sum())
    return abs(count / point_set.n - math.prod(float(v) for v in x))


def local_discs(point_set: PointSet, corners: np.ndarray) -> np.ndarray:
    """local_disc for every row of ``corners``."""
    pts = point_set.points
    out = np.empty(corners.shape[0])
    for start in range(0, corners.shape[0], _BLOCK):
        block = corners[start:start + _BLOCK]
        counts = np.all(pts[None, :, :] < block[:, None, :], axis=2).sum(axis=1)
        out[start:start + _BLOCK] = np.abs(counts / point_set.n - np.prod(block, axis=1))
    return out


def oracle_size(point_set: PointSet) -> int:
    """N times the number of critical-grid corners."""
    sizes = [np.unique(point_set.points[:, j]).size + 1 for j in range(point_set.d)]
    return point_set.n * math.prod(sizes)


def star_disc_exact(point_set: PointSet) -> DiscrepancyResult:
    """Exact star-discrepancy by critical-grid enumeration.

    Per axis the grid holds the point coordinates and 1. At every grid
    corner y two quantities are evaluated: the closed excess
    #{p <= y}/N - vol(y), a limit of boxes shrinking onto y from above,
    and the open deficiency vol(y) - #{p < y}/N. The supremum over
    half-open boxes is the largest of them. Corners are visited in
    lexicographic order and the first maximum wins.

    Raises:
        InfeasibleSizeError: If N times the corner count exceeds the oracle cap.
    """
    pts = point_set.points
    n, d = pts.shape
    size = oracle_size(point_set)
    cap = get_oracle_cap()
    if size > cap:
        raise InfeasibleSizeError(f"exact oracle N={n} d={d}", size, cap)

    grids = [np.unique(np.append(pts[:, j], 1.0)) for j in range(d)]
    last = grids[-1]
    best, best_corner, best_rule = -1.0, None, None
    for prefix in itertools.product(*(g.tolist() for g in grids[:-1])):
        closed = np.ones(n, dtype=bool)
        opened = np.ones(n, dtype=bool)
        for j, y in enumerate(prefix):
            closed &= pts[:, j] <= y
            opened &= pts[:, j] < y
        vol = math.prod(prefix) * last
        closed_counts = np.searchsorted(np.sort(pts[closed, -1]), last, side="right")
        open_counts = np.searchsorted(np.sort(pts[opened, -1]), last, side="left")
        excess = closed_counts / n - vol
        deficiency = vol - open_counts / n
        local = np.maximum(excess, deficiency)
        i = int(np.argmax(local))
        if local[i] > best:
            best = float(local[i])
            best_corner = tuple(prefix) + (float(last[i]),)
            best_rule = "closed" if excess[i] >= deficiency[i] else "open"

    return DiscrepancyResult(best, "exact", best_corner, best_rule)


def star_disc_1d_sorted(point_set: PointSet) -> float:
    """max_k max(k/N - p_(k), p_(k) - (k-1)/N) over the sorted points."""
    if point_set.d != 1:
        raise DimensionMismatchError(f"needs d = 1, got {point_set.d}")
    p = np.sort(point_set.points[:, 0])
    n = p.size
    k = np.arange(1, n + 1)
    return float(max(np.max(k / n - p), np.max(p - (k - 1) / n)))


def star_disc_upper_cover(point_set: PointSet, cover: DeltaCover) -> CoverBound:
    """Bracket D* between the max of local_disc over the cover and that max plus delta."""
    if cover.d != point_set.d:
        raise DimensionMismatchError(f"cover has d={cover.d}, points have d={point_set.d}")
    corners = cover.as_array()
    if corners.shape[0] == 0:
        best, witness = 0.0, None
    else:
        values = local_discs(point_set, corners)
        i = int(np.argmax(values))
        best, witness = float(values[i]), tuple(float(v) for v in corners[i])
    return CoverBound(
        lower=DiscrepancyResult(best, "cover-lower", witness),
        upper=DiscrepancyResult(best + cover.delta, "cover-upper", witness),
    )


def weighted_star_disc(point_set: PointSet, weights: WeightScheme, mode: str | float = "exact") -> WeightedResult:
    """max over subsets u of gamma_u times D* of the projection onto u.

    ``mode`` is ``"exact"`` or a cover tolerance delta, in which case each
    projection is bounded from above through a delta-cover of its dimension.

    Raises:
        DimensionMismatchError: If the weights and points disagree on d.
        InfeasibleSizeError: If a projection exceeds the oracle or cover cap.
    """
    if weights.d != point_set.d:
        raise DimensionMismatchError(f"weights have d={weights.d}, points have d={point_set.d}")
    subsets = weights.positive_subsets()

    if mode == "exact":
        def evaluate(mask: int) -> float:
            return star_disc_exact(point_set.project(mask_to_subset(mask))).value
        label = "exact"
    else:
        delta = float(mode)
        covers = {}
        for size in sorted({len(mask_to_subset(m)) for m, _ in subsets}):
            covers[size] = build_cover_nd(size, delta).delta_cover()

        def evaluate(mask: int) -> float:
            coords = mask_to_subset(mask)
            return star_disc_upper_cover(point_set.project(coords), covers[len(coords)]).upper.value
        label = f"cover({delta!r})"

    with ThreadPoolExecutor(max_workers=get_workers()) as pool:
        values = list(pool.map(evaluate, [m for m, _ in subsets]))

    result = WeightedResult(value=0.0, mode=label)
    for (mask, gamma), value in zip(subsets, values):
        result.per_subset[mask] = value
        if gamma * value > result.value:
            result.value = gamma * value
            result.subset = tuple(j + 1 for j in mask_to_subset(mask))
    logger.debug("weighted discrepancy over %d subsets: %s", len(subsets), result.value)
    return result
