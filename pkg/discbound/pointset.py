"""Point sets, coordinate-subset weights and their CSV formats."""

import csv
import io
import math
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import DomainError, FileFormatError

_HEADER_RE = re.compile(r"#\s*d=(?P<d>\d+)\s+n=(?P<n>\d+)")


def format_real(value: float) -> str:
    """Shortest round-trip decimal rendering of a float."""
    return repr(float(value))


@dataclass
class PointSet:
    """N points in [0,1)^d, stored as an (N, d) float array."""
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DomainError(f"a point set needs shape (N, d) with N, d >= 1, got {pts.shape}")
        if not np.all((pts >= 0.0) & (pts < 1.0)):
            raise DomainError("every coordinate must lie in [0, 1)")
        self.points = pts

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.n

    @classmethod
    def from_rows(cls, rows) -> "PointSet":
        return cls(np.array([list(map(float, row)) for row in rows], dtype=float))

    def project(self, coords) -> "PointSet":
        """Restrict to the given 0-based coordinate indices."""
        return PointSet(self.points[:, sorted(coords)])


def midpoint_set(n: int) -> PointSet:
    """The one-dimensional set {(2i-1)/(2n)}, whose star-discrepancy is 1/(2n)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return PointSet((2 * np.arange(1, n + 1) - 1) / (2 * n))


def write_points_csv(point_set: PointSet, out: TextIO, header: bool = True) -> None:
    """Write one point per row, optionally preceded by ``# d=<d> n=<N>``."""
    if header:
        out.write(f"# d={point_set.d} n={point_set.n}\n")
    writer = csv.writer(out, lineterminator="\n")
    for row in point_set.points:
        writer.writerow([format_real(x) for x in row])


def read_points_csv(source: Path | str | TextIO) -> PointSet:
    """Read a point set file; comment lines starting with ``#`` are skipped.

    A ``# d=<d> n=<N>`` comment, when present, must match the rows read.
    """
    text = _read_text(source)
    rows = []
    declared = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or row[0].lstrip().startswith("#"):
            match = _HEADER_RE.fullmatch(",".join(row).strip())
            if match and declared is None:
                declared = (int(match["d"]), int(match["n"]))
            continue
        try:
            rows.append([float(x) for x in row])
        except ValueError as e:
            raise FileFormatError(f"line {lineno}: {e}") from e
    if not rows:
        raise FileFormatError("point file holds no points")
    if len({len(r) for r in rows}) != 1:
        raise FileFormatError("rows have differing numbers of columns")
    if declared is not None and declared != (len(rows[0]), len(rows)):
        raise FileFormatError(
            f"header declares d={declared[0]} n={declared[1]} but the file holds "
            f"{len(rows)} points in d={len(rows[0])}"
        )
    try:
        return PointSet(np.array(rows))
    except DomainError as e:
        raise FileFormatError(str(e)) from e


def _read_text(source: Path | str | TextIO) -> str:
    if isinstance(source, (str, Path)):
        with open(source, "r") as f:
            return f.read()
    return source.read()


# ============================================================================
# Weights
# ============================================================================


def subset_to_mask(subset) -> int:
    """Bitmask with bit j set for 0-based coordinate j."""
    mask = 0
    for j in subset:
        mask |= 1 << j
    return mask


def mask_to_subset(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if mask >> j & 1)


@dataclass
class WeightScheme:
    """Nonnegative weights gamma_u keyed by coordinate-subset bitmask."""
    d: int
    weights: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        full = (1 << self.d) - 1
        for mask, gamma in self.weights.items():
            if mask <= 0 or mask & ~full:
                raise DomainError(f"subset mask {mask} is not a nonempty subset of {self.d} coordinates")
            if gamma < 0 or math.isnan(gamma):
                raise DomainError(f"weight for mask {mask} must be >= 0, got {gamma}")
        if not any(g > 0 for g in self.weights.values()):
            raise DomainError("at least one weight must be positive")

    @classmethod
    def from_product(cls, gammas) -> "WeightScheme":
        """gamma_u = prod_{j in u} gamma_j for every nonempty u."""
        gammas = [float(g) for g in gammas]
        d = len(gammas)
        weights = {}
        for size in range(1, d + 1):
            for subset in combinations(range(d), size):
                weights[subset_to_mask(subset)] = math.prod(gammas[j] for j in subset)
        return cls(d, weights)

    @classmethod
    def full_set_only(cls, d: int) -> "WeightScheme":
        return cls(d, {(1 << d) - 1: 1.0})

    def positive_subsets(self) -> list[tuple[int, float]]:
        """(mask, gamma) pairs with gamma > 0, ordered by mask."""
        return [(m, g) for m, g in sorted(self.weights.items()) if g > 0]


def read_weights_csv(source: Path | str | TextIO, d: int) -> WeightScheme:
    """Read rows ``u-bitmask,gamma_u`` (bit j-1 stands for coordinate j)."""
    text = _read_text(source)
    weights = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise FileFormatError(f"line {lineno}: expected 'mask,weight'")
        try:
            weights[int(row[0], 0)] = float(row[1])
        except ValueError as e:
            raise FileFormatError(f"line {lineno}: {e}") from e
    try:
        return WeightScheme(d, weights)
    except DomainError as e:
        raise FileFormatError(str(e)) from e
