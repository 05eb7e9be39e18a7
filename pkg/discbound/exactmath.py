"""Exact Bernoulli numbers, Faulhaber sums and the shifted Faulhaber inequality.

Everything here works on ``fractions.Fraction`` so comparisons are exact.
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError

logger = logging.getLogger(__name__)

Rational = Fraction

# B_0, B_1, ... under the B_1 = -1/2 convention, extended on demand
_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


@dataclass(frozen=True)
class FaulhaberTriple:
    """Arguments (n, j, r) of a shifted power sum."""
    n: int
    j: int
    r: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.j < 0:
            raise DomainError(f"j must be >= 0, got {self.j}")
        if not 0 <= self.r <= 1:
            raise DomainError(f"r must lie in [0, 1], got {self.r}")


def _as_rational(r) -> Fraction:
    if isinstance(r, float):
        # floats are taken at their decimal reading, 0.1 -> 1/10
        return Fraction(repr(r))
    return Fraction(r)


def bernoulli(k: int) -> Fraction:
    """Return the Bernoulli number B_k with B_1 = -1/2.

    Uses the recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
    Computed values are cached and shared between threads.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k < len(_bernoulli_cache):
        return _bernoulli_cache[k]

    with _bernoulli_lock:
        for m in range(len(_bernoulli_cache), k + 1):
            if m >= 3 and m % 2 == 1:
                _bernoulli_cache.append(Fraction(0))
                continue
            s = sum(
                (math.comb(m + 1, j) * _bernoulli_cache[j] for j in range(m)),
                Fraction(0),
            )
            _bernoulli_cache.append(-s / (m + 1))
        return _bernoulli_cache[k]


def falling_factorial(j: int, m: int) -> int:
    """Return (j)_m = j (j-1) ... (j-m+1), with (j)_0 = 1."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    result = 1
    for i in range(m):
        result *= j - i
    return result


def power_sum(n: int, j: int, r=0) -> Fraction:
    """Exact value of sum_{i=1}^{n} (i + r)^j by direct summation."""
    triple = FaulhaberTriple(n, j, _as_rational(r))
    return sum(((i + triple.r) ** j for i in range(1, n + 1)), Fraction(0))


def power_sum_float(n: int, j: int, r: float = 0.0) -> float:
    """Floating approximation of power_sum for irrational shifts."""
    if n < 1 or j < 0 or not 0.0 <= r <= 1.0:
        raise DomainError(f"invalid triple ({n}, {j}, {r})")
    return math.fsum((i + r) ** j for i in range(1, n + 1))


def faulhaber_closed(n: int, j: int) -> Fraction:
    """Faulhaber's closed form of sum_{i=1}^{n} i^j.

    n^{j+1}/(j+1) + n^j/2 + sum_{k=2}^{j} (-1)^k B_k / k! (j)_{k-1} n^{j-k+1}
    """
    if n < 1 or j < 1:
        raise DomainError(f"need n >= 1 and j >= 1, got ({n}, {j})")
    total = Fraction(n ** (j + 1), j + 1) + Fraction(n**j, 2)
    for k in range(2, j + 1):
        b = bernoulli(k)
        if b == 0:
            continue
        total += (-1) ** k * b / math.factorial(k) * falling_factorial(j, k - 1) * n ** (j - k + 1)
    return total


def gfi_rhs(n: int, j: int, r=0) -> Fraction:
    """Right-hand side of the shifted Faulhaber inequality.

    (n+r)^{j+1}/(j+1) + (n+r)^j/2 + j (n+r)^{j-1}/12
    """
    triple = FaulhaberTriple(n, j, _as_rational(r))
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    m = n + triple.r
    return m ** (j + 1) / (j + 1) + m**j / 2 + j * m ** (j - 1) / 12


def f_r(j: int, r=0) -> Fraction:
    """Return (1+r)/(j+1) + 1/2 + j/(12(1+r)), which is >= 1 for j >= 1."""
    r = _as_rational(r)
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    if not 0 <= r <= 1:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    return (1 + r) / (j + 1) + Fraction(1, 2) + j / (12 * (1 + r))


def f_r_minimizer(r: float) -> float:
    """Real minimizer sqrt(12)(1+r) - 1 of x -> f_r(x)."""
    return math.sqrt(12.0) * (1.0 + float(r)) - 1.0


@dataclass
class GfiReport:
    """Result of an exhaustive check of the shifted Faulhaber inequality."""
    n_max: int
    j_max: int
    r_grid: list[Fraction]
    checked: int = 0
    counterexample: FaulhaberTriple | None = None
    equality_cases: list[FaulhaberTriple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def verify_gfi(n_max: int, j_max: int, r_grid) -> GfiReport:
    """Check sum_{i<=n} (i+r)^j <= gfi_rhs(n, j, r) exactly on a grid.

    All triples with 1 <= n <= n_max, 1 <= j <= j_max and r in r_grid are
    checked. Power sums are accumulated over n so each term is raised to
    its power only once.

    Returns:
        A GfiReport holding the first counterexample (if any) and every
        triple where both sides are equal.
    """
    if n_max < 1 or j_max < 1:
        raise DomainError(f"n_max and j_max must be >= 1, got ({n_max}, {j_max})")
    grid = [_as_rational(r) for r in r_grid]
    for r in grid:
        if not 0 <= r <= 1:
            raise DomainError(f"shift {r} lies outside [0, 1]")

    report = GfiReport(n_max=n_max, j_max=j_max, r_grid=grid)
    for r in grid:
        for j in range(1, j_max + 1):
            lhs = Fraction(0)
            for n in range(1, n_max + 1):
                lhs += (n + r) ** j
                rhs = gfi_rhs(n, j, r)
                report.checked += 1
                if lhs > rhs:
                    report.counterexample = FaulhaberTriple(n, j, r)
                    logger.warning("Faulhaber inequality fails at n=%d j=%d r=%s", n, j, r)
                    return report
                if lhs == rhs:
                    report.equality_cases.append(FaulhaberTriple(n, j, r))

    logger.info("Checked %d triples, %d equality cases", report.checked, len(report.equality_cases))
    return report


def parse_r_grid(spec: str) -> list[Fraction]:
    """Parse a shift grid such as ``"0,1/4,1/2"`` or ``"step:1/8"``.

    ``step:h`` expands to 0, h, 2h, ..., 1.
    """
    spec = spec.strip()
    if spec.startswith("step:"):
        step = Fraction(spec[5:])
        if step <= 0 or step > 1:
            raise DomainError(f"grid step must lie in (0, 1], got {step}")
        count = int(1 / step)
        grid = [step * i for i in range(count + 1)]
        if grid[-1] != 1:
            grid.append(Fraction(1))
        return grid
    try:
        grid = [Fraction(part.strip()) for part in spec.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"invalid shift grid {spec!r}: {e}") from e
    if not grid:
        raise DomainError("shift grid is empty")
    return grid
