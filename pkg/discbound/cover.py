"""Explicit delta-covers and delta-bracketing covers of the unit cube.

A bracket [lower, upper] is a closed axis-parallel box; its weight is
vol([0, upper]) - vol([0, lower]). A bracketing cover is a list of
brackets of weight <= delta whose union is [0,1]^d.
"""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, TextIO

import numpy as np

from .bounds import bound_general, bracketing_1d
from .errors import DomainError, FileFormatError, InfeasibleSizeError
from .pointset import format_real
from .sampling import make_rng
from .settings import get_cover_cap, get_grid_cap, get_workers

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12

# Points tested per containment block during validation
_CHUNK = 512


@dataclass(frozen=True)
class Bracket:
    """Closed box [lower, upper] inside [0,1]^d."""
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise DomainError("bracket corners have different dimensions")
        if any(lo > up for lo, up in zip(self.lower, self.upper)):
            raise DomainError(f"lower corner {self.lower} is not below {self.upper}")

    @property
    def d(self) -> int:
        return len(self.upper)

    @property
    def weight(self) -> float:
        return math.prod(self.upper) - math.prod(self.lower)

    def contains(self, y) -> bool:
        return all(lo <= v <= up for lo, v, up in zip(self.lower, y, self.upper))


@dataclass
class DeltaCover:
    """Points such that every y is sandwiched x <= y <= z with volume gap <= delta.

    The origin belongs to every cover implicitly and is never stored.
    """
    d: int
    delta: float
    points: list[tuple[float, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, self.d)


@dataclass
class BracketingCover:
    """Brackets of weight <= delta covering [0,1]^d."""
    d: int
    delta: float
    brackets: list[Bracket] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.brackets)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) corner arrays of shape (count, d)."""
        lower = np.array([b.lower for b in self.brackets], dtype=float).reshape(-1, self.d)
        upper = np.array([b.upper for b in self.brackets], dtype=float).reshape(-1, self.d)
        return lower, upper

    def delta_cover(self) -> DeltaCover:
        return cover_to_delta_cover(self)


class CoverPair(NamedTuple):
    """A bracketing cover together with the delta-cover it induces."""
    brackets: BracketingCover
    points: DeltaCover


@dataclass(frozen=True)
class Layer2D:
    """One diagonal layer [0, a_prev]^2 minus [0, a_q)^2 of the planar cover."""
    q: int
    a_prev: float
    a_q: float
    delta_q: float
    stop_index: int  # f: brackets in one strip, closing bracket included
    count: int  # brackets the layer contributes


def _check_delta(delta: float, allow_one: bool = False) -> None:
    upper_ok = delta <= 1.0 if allow_one else delta < 1.0
    if not (delta > 0.0 and upper_ok):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"delta must lie in {interval}, got {delta}")


# ============================================================================
# d = 1
# ============================================================================


def build_cover_1d(delta: float) -> CoverPair:
    """Brackets [(k-1)/n, k/n] and points k/n, k = 1..n, with n = ceil(1/delta)."""
    _check_delta(delta, allow_one=True)
    n = bracketing_1d(delta)
    brackets = [Bracket(((k - 1) / n,), (k / n,)) for k in range(1, n + 1)]
    points = [(k / n,) for k in range(1, n + 1)]
    return CoverPair(BracketingCover(1, delta, brackets), DeltaCover(1, delta, points))


# ============================================================================
# d = 2
# ============================================================================


def layer_count_2d(delta_q: float) -> int:
    """Certified bound 2 f(delta_q) - 1 on the brackets of one layer.

    f(delta_q) = ceil(-2 ln 2 / ln(1 - delta_q)) + 1.
    """
    _check_delta(delta_q)
    f = math.ceil(-2 * math.log(2.0) / math.log1p(-delta_q)) + 1
    return 2 * f - 1


def _strip_breakpoints(outer: float, inner: float, delta: float) -> list[float]:
    """Breakpoints x_0 = outer > x_1 = inner > ... of the strip [0, outer] x [inner, outer].

    Brackets [(x_i, inner), (x_{i-1}, outer)] have weight exactly delta when
    x_i = (x_{i-1} outer - delta) / inner. The list stops at the first x_i
    with x_i outer <= delta, where the closing bracket [0, (x_i, outer)]
    takes over.
    """
    xs = [outer, inner]
    while xs[-1] * outer > delta:
        xs.append((xs[-1] * outer - delta) / inner)
    return xs


def _layer_brackets(outer: float, inner: float, delta: float) -> list[Bracket]:
    xs = _strip_breakpoints(outer, inner, delta)
    top = [Bracket((xs[i], inner), (xs[i - 1], outer)) for i in range(1, len(xs))]
    top.append(Bracket((0.0, 0.0), (xs[-1], outer)))
    # the diagonal bracket top[0] is its own mirror image
    mirrored = [Bracket(b.lower[::-1], b.upper[::-1]) for b in top[1:]]
    return top + mirrored


def _diagonal_2d(delta: float) -> tuple[list[float], int]:
    """Diagonal values a_0 = 1, a_q = sqrt(1 - q delta) and the last full layer."""
    n = bracketing_1d(delta)
    a = [1.0]
    for q in range(1, n):
        rest = 1.0 - q * delta
        if rest <= 0.0:
            break
        a.append(math.sqrt(rest))
    return a, len(a)


def layers_2d(delta: float) -> list[Layer2D]:
    """Describe every layer of the planar construction, the final box included."""
    _check_delta(delta)
    a, last = _diagonal_2d(delta)
    layers = []
    for q in range(1, last):
        outer, inner = a[q - 1], a[q]
        xs = _strip_breakpoints(outer, inner, delta)
        layers.append(Layer2D(
            q=q,
            a_prev=outer,
            a_q=inner,
            delta_q=delta / (1.0 - (q - 1) * delta),
            stop_index=len(xs),
            count=2 * len(xs) - 1,
        ))
    layers.append(Layer2D(
        q=last,
        a_prev=a[last - 1],
        a_q=0.0,
        delta_q=delta / (1.0 - (last - 1) * delta),
        stop_index=1,
        count=1,
    ))
    return layers


def build_cover_2d(delta: float) -> CoverPair:
    """Layered planar cover.

    The square is cut along the diagonal at a_q = sqrt(1 - q delta),
    q = 1..n-1 with n = ceil(1/delta). Each layer is covered by a strip of
    weight-delta brackets above the diagonal box, its mirror image and one
    closing bracket; the innermost box [0, a_{n-1}]^2 has volume <= delta
    and is a bracket by itself.
    """
    _check_delta(delta)
    a, last = _diagonal_2d(delta)
    brackets = []
    for q in range(1, last):
        brackets.extend(_layer_brackets(a[q - 1], a[q], delta))
    brackets.append(Bracket((0.0, 0.0), (a[last - 1], a[last - 1])))
    logger.info("planar cover at delta=%s: %d brackets in %d layers", delta, len(brackets), last)
    cover = BracketingCover(2, delta, brackets)
    return CoverPair(cover, cover_to_delta_cover(cover))


# ============================================================================
# general d
# ============================================================================


def _shell_volumes(delta: float) -> list[float]:
    """Volumes 1 = R_0 > R_1 > ... of the nested boxes; the last is <= delta.

    R_q = 1 - q delta, except that the innermost box is enlarged to half the
    volume of its parent when 1 - (n-1) delta is smaller, which keeps the
    last shell away from tolerance 1.
    """
    n = bracketing_1d(delta)
    volumes = [1.0 - q * delta for q in range(n)]
    if n >= 2:
        volumes[-1] = max(volumes[-1], volumes[-2] / 2)
    return volumes


def _unit_cover(d: int, tolerance: float, cap: int) -> list[Bracket]:
    if tolerance >= 1.0:
        return [Bracket((0.0,) * d, (1.0,) * d)]
    return _build_nd(d, tolerance, cap)


def _build_nd(d: int, delta: float, cap: int) -> list[Bracket]:
    if d == 1:
        return build_cover_1d(delta).brackets.brackets
    if d == 2:
        return build_cover_2d(delta).brackets.brackets

    volumes = _shell_volumes(delta)
    radii = [v ** (1.0 / d) for v in volumes]
    brackets: dict[Bracket, None] = {}
    for q in range(1, len(radii)):
        outer, inner = radii[q - 1], radii[q]
        # slab brackets must satisfy vol(u') - (inner/outer) vol(l') <= delta/outer^d
        tolerance = delta / volumes[q - 1] - (1.0 - inner / outer)
        face = _unit_cover(d - 1, tolerance, cap)
        for j in range(d):
            for b in face:
                lower = tuple(outer * x for x in b.lower)
                upper = tuple(outer * x for x in b.upper)
                brackets[Bracket(lower[:j] + (inner,) + lower[j:], upper[:j] + (outer,) + upper[j:])] = None
            if len(brackets) > cap:
                raise InfeasibleSizeError(f"cover d={d} delta={delta}", len(brackets), cap)
    r = radii[-1]
    brackets[Bracket((0.0,) * d, (r,) * d)] = None
    return list(brackets)


def build_cover_nd(d: int, delta: float) -> BracketingCover:
    """Bracketing cover of [0,1]^d for any d.

    d = 1 and d = 2 use the dedicated constructions. For d >= 3 the cube
    is peeled into shells between nested diagonal boxes of volume
    1 - q delta. A shell [0, A]^d minus [0, B)^d splits into d slabs
    {x_j >= B}; each slab is covered by a (d-1)-dimensional cover of the
    remaining coordinates, scaled by A, at tolerance
    delta/A^d - (1 - B/A), and extended by [B, A] along coordinate j.
    Slabs overlap.

    Raises:
        DomainError: If d < 1 or delta is outside (0, 1).
        InfeasibleSizeError: If the general bound or the running count
            exceeds the configured cover cap.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    _check_delta(delta)
    cap = get_cover_cap()
    estimate = bound_general(d, delta)
    if estimate > cap:
        raise InfeasibleSizeError(f"cover d={d} delta={delta}", estimate, cap)
    brackets = _build_nd(d, delta, cap)
    logger.info("cover d=%d delta=%s: %d brackets (general bound %.6g)", d, delta, len(brackets), estimate)
    return BracketingCover(d, delta, brackets)


def cover_to_delta_cover(cover: BracketingCover) -> DeltaCover:
    """All bracket corners except the origin, deduplicated and sorted."""
    corners = set()
    for b in cover.brackets:
        corners.add(b.lower)
        corners.add(b.upper)
    corners.discard((0.0,) * cover.d)
    return DeltaCover(cover.d, cover.delta, sorted(corners))


# ============================================================================
# validation
# ============================================================================


@dataclass
class CoverValidation:
    """Outcome of validate_cover."""
    count: int
    max_weight: float
    heavy_brackets: list[int] = field(default_factory=list)
    points_checked: int = 0
    uncovered: int = 0
    witness: tuple[float, ...] | None = None

    @property
    def weight_ok(self) -> bool:
        return not self.heavy_brackets

    @property
    def coverage_ok(self) -> bool:
        return self.uncovered == 0

    @property
    def passed(self) -> bool:
        return self.weight_ok and self.coverage_ok


def corner_grid(lower: np.ndarray, upper: np.ndarray, cap: int) -> np.ndarray:
    """Products of the distinct corner coordinates per axis, thinned to about cap points."""
    d = lower.shape[1]
    axes = [np.unique(np.concatenate([lower[:, j], upper[:, j]])) for j in range(d)]
    if math.prod(len(a) for a in axes) > cap:
        per_axis = max(2, int(cap ** (1.0 / d)))
        thinned = []
        for a in axes:
            if len(a) > per_axis:
                idx = np.unique(np.linspace(0, len(a) - 1, per_axis).round().astype(int))
                a = a[idx]
            thinned.append(a)
        axes = thinned
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _uncovered_in_chunk(args) -> np.ndarray:
    points, lower, upper, vol_lower, vol_upper, slack = args
    v = np.prod(points, axis=1)
    lo = np.searchsorted(vol_upper, v.min(), side="left")
    hi = np.searchsorted(vol_upper, v.max() + slack, side="right")
    keep = vol_lower[lo:hi] <= v.max()
    cand_l, cand_u = lower[lo:hi][keep], upper[lo:hi][keep]
    if cand_l.shape[0] == 0:
        return np.ones(points.shape[0], dtype=bool)
    inside = (
        (cand_l[None, :, :] <= points[:, None, :]) & (points[:, None, :] <= cand_u[None, :, :])
    ).all(axis=2)
    return ~inside.any(axis=1)


def find_uncovered(cover: BracketingCover, points: np.ndarray) -> np.ndarray:
    """Boolean mask of the points that lie in no bracket.

    Brackets are sorted by upper volume; a point y can only lie in brackets
    with vol(lower) <= prod(y) <= vol(upper) <= prod(y) + max weight.
    """
    lower, upper = cover.arrays()
    vol_lower = np.prod(lower, axis=1)
    vol_upper = np.prod(upper, axis=1)
    order = np.argsort(vol_upper, kind="stable")
    lower, upper = lower[order], upper[order]
    vol_lower, vol_upper = vol_lower[order], vol_upper[order]
    slack = max(float(np.max(vol_upper - vol_lower)), 0.0) + WEIGHT_TOLERANCE

    by_volume = np.argsort(np.prod(points, axis=1), kind="stable")
    chunks = [by_volume[i:i + _CHUNK] for i in range(0, len(by_volume), _CHUNK)]
    jobs = [(points[idx], lower, upper, vol_lower, vol_upper, slack) for idx in chunks]
    with ThreadPoolExecutor(max_workers=get_workers()) as pool:
        results = list(pool.map(_uncovered_in_chunk, jobs))

    mask = np.zeros(points.shape[0], dtype=bool)
    for idx, res in zip(chunks, results):
        mask[idx] = res
    return mask


def validate_cover(cover: BracketingCover, n_random: int = 100_000, seed: int = 0) -> CoverValidation:
    """Check bracket weights and coverage of a deterministic grid plus random points.

    The grid is built from the bracket corner coordinates (see corner_grid);
    the random points are uniform on [0,1)^d from make_rng(seed). The
    witness is the first uncovered point, grid points first.
    """
    lower, upper = cover.arrays()
    weights = np.prod(upper, axis=1) - np.prod(lower, axis=1)
    malformed = (lower > upper).any(axis=1) | (lower < 0.0).any(axis=1) | (upper > 1.0).any(axis=1)
    heavy = np.flatnonzero((weights > cover.delta + WEIGHT_TOLERANCE) | malformed)

    grid = corner_grid(lower, upper, get_grid_cap())
    random = make_rng(seed).random((n_random, cover.d))
    points = np.vstack([grid, random])
    mask = find_uncovered(cover, points)
    bad = np.flatnonzero(mask)

    result = CoverValidation(
        count=len(cover),
        max_weight=float(weights.max()) if len(weights) else 0.0,
        heavy_brackets=[int(i) for i in heavy],
        points_checked=points.shape[0],
        uncovered=int(bad.size),
        witness=tuple(float(x) for x in points[bad[0]]) if bad.size else None,
    )
    logger.info(
        "validated %d brackets on %d points: %d heavy, %d uncovered",
        result.count, result.points_checked, len(result.heavy_brackets), result.uncovered,
    )
    return result


# ============================================================================
# files
# ============================================================================


def write_cover_csv(cover: BracketingCover, out: TextIO) -> None:
    """Header row ``d,delta,count``, its values, then lower and upper corners per row."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["d", "delta", "count"])
    writer.writerow([cover.d, format_real(cover.delta), len(cover)])
    for b in cover.brackets:
        writer.writerow([format_real(x) for x in b.lower + b.upper])


def read_cover_csv(source: Path | str | TextIO) -> BracketingCover:
    """Parse a file written by write_cover_csv.

    Raises:
        FileFormatError: On a malformed header, row width or count.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r") as f:
            text = f.read()
    else:
        text = source.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2 or [c.strip() for c in rows[0]] != ["d", "delta", "count"]:
        raise FileFormatError("cover file must start with the header 'd,delta,count'")
    try:
        d, delta, count = int(rows[1][0]), float(rows[1][1]), int(rows[1][2])
        brackets = []
        for lineno, row in enumerate(rows[2:], 3):
            if len(row) != 2 * d:
                raise FileFormatError(f"line {lineno}: expected {2 * d} columns, got {len(row)}")
            values = tuple(float(x) for x in row)
            brackets.append(Bracket(values[:d], values[d:]))
    except (ValueError, IndexError) as e:
        raise FileFormatError(f"invalid cover file: {e}") from e
    if count != len(brackets):
        raise FileFormatError(f"header announces {count} brackets, file holds {len(brackets)}")
    return BracketingCover(d, delta, brackets)


def write_delta_cover_csv(points: DeltaCover, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    for p in points.points:
        writer.writerow([format_real(x) for x in p])
