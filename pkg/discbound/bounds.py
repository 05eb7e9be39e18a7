"""Bracketing-number bounds and the computer checks behind the general-d bound."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .constants import get_constants
from .errors import DomainError
from .reports import CheckReport

logger = logging.getLogger(__name__)

# exp() overflows above this
_LOG_FLOAT_MAX = math.log(1.7976931348623157e308)

# Relative slack under which two scanned values count as a tie
_TIE_TOLERANCE = 1e-12

# Margin above 1 treated as failure by the floating "<= 1" checks
_FLOAT_MARGIN = 1e-9

# Largest d for which the proof checks run in exact arithmetic
EXACT_LIMIT = 101


@dataclass(frozen=True)
class BoundParams:
    """Dimension and tolerance a bracketing bound is evaluated at."""
    d: int
    delta: float

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass
class BoundReport:
    """Value of one closed-form bound."""
    name: str
    value: float
    params: BoundParams
    overflow: bool = False


def _exp_flagged(log_value: float, name: str) -> float:
    if log_value > _LOG_FLOAT_MAX:
        logger.warning("%s overflows (log value %.6g); reporting +inf", name, log_value)
        return math.inf
    return math.exp(log_value)


def log_dd_over_dfact(d: int) -> float:
    """Natural log of d^d / d!."""
    return d * math.log(d) - math.lgamma(d + 1)


def bracketing_1d(delta: float) -> int:
    """Return the one-dimensional bracketing number ceil(1/delta).

    The float is read at its decimal value, so 0.1 gives 10 exactly.
    """
    if not 0.0 < delta <= 1.0:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    return math.ceil(1 / Fraction(repr(float(delta))))


def bound_gnewuch(d: int, delta: float) -> float:
    """2^{d-1} d^d/d! (1/delta + 1)^d."""
    p = BoundParams(d, delta)
    log_value = (p.d - 1) * math.log(2.0) + log_dd_over_dfact(p.d) + p.d * math.log1p(1.0 / p.delta)
    return _exp_flagged(log_value, "gnewuch")


def bound_pw(d: int, delta: float) -> float:
    """2^{d-2} d^d/d! (1/delta + 1)^d + (1/delta + 1)/2."""
    p = BoundParams(d, delta)
    log_value = (p.d - 2) * math.log(2.0) + log_dd_over_dfact(p.d) + p.d * math.log1p(1.0 / p.delta)
    return _exp_flagged(log_value, "pw") + 0.5 * (1.0 / p.delta + 1.0)


def bound_d2(delta: float) -> float:
    """Two-dimensional bound 2 ln2/delta^2 + 3(ln2 + 1)/delta - (13/9 ln2 - 1)."""
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    ln2 = math.log(2.0)
    return 2 * ln2 / delta**2 + 3 * (ln2 + 1) / delta - (13 / 9 * ln2 - 1)


def log_bd_factor(d: int) -> float:
    """Natural log of bd_factor(d), finite for every d."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    c = get_constants()
    return max(0.0, (d - c.bd_threshold) * math.log(c.bd_base))


def bd_factor(d: int) -> float:
    """Large-d factor max(1.1^{d-101}, 1); +inf once it leaves float range."""
    return _exp_flagged(log_bd_factor(d), "bd_factor")


def bound_general(d: int, delta: float) -> float:
    """max(1.1^{d-101}, 1) d^d/d! (1/delta + 1)^d."""
    p = BoundParams(d, delta)
    log_value = log_bd_factor(p.d) + log_dd_over_dfact(p.d) + p.d * math.log1p(1.0 / p.delta)
    return _exp_flagged(log_value, "general")


def evaluate_bounds(d: int, delta: float) -> list[BoundReport]:
    """Evaluate every closed-form bound that applies to (d, delta)."""
    params = BoundParams(d, delta)
    evaluators = [("gnewuch", bound_gnewuch), ("pw", bound_pw)]
    reports = []
    for name, fn in evaluators:
        value = fn(d, delta)
        reports.append(BoundReport(name, value, params, overflow=math.isinf(value)))
    if d == 2:
        reports.append(BoundReport("d2", bound_d2(delta), params))
    value = bound_general(d, delta)
    reports.append(BoundReport("general", value, params, overflow=math.isinf(value)))
    return reports


# ---------------------------------------------------------------------------
# Maximizer lemmas
# ---------------------------------------------------------------------------


def _check_k(d: int, k: int) -> None:
    if d < 1 or not 1 <= k <= d:
        raise DomainError(f"need 1 <= k <= d, got d={d}, k={k}")


def _falling_ratio(d: int, k: int) -> float:
    """d! / (d^{k-1} (d-k+1)!) = prod_{i=1}^{k-2} (1 - i/d)."""
    product = 1.0
    for i in range(1, k - 1):
        product *= 1.0 - i / d
    return product


def _falling_ratios(d: int) -> list[float]:
    """_falling_ratio(d, k) for k = 0..d, built incrementally (index 0 unused)."""
    ratios = [1.0, 1.0, 1.0]
    for k in range(2, d):
        ratios.append(ratios[k] * (1.0 - (k - 1) / d))
    return ratios[: d + 1]


def _scan_argmax(values: dict[int, float]) -> int:
    """Smallest key whose value is maximal up to a relative tie tolerance.

    Values must be positive.
    """
    best_k = None
    best = 0.0
    for k in sorted(values):
        if values[k] > best * (1.0 + _TIE_TOLERANCE):
            best_k, best = k, values[k]
    return best_k


def lemma25_f(d: int, k: int) -> float:
    """d!/(d^{k-1}(d-k+1)!) (k/12 + 1/2)."""
    _check_k(d, k)
    return _falling_ratio(d, k) * (k / 12 + 0.5)


def lemma25_formula(d: int) -> int:
    """Closed-form maximizer -3 + ceil(sqrt(16 + d)), clamped to [1, d]."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    return max(1, min(d, -3 + math.isqrt(16 + d - 1) + 1))


def lemma25_argmax(d: int) -> int:
    """Smallest maximizer of lemma25_f(d, .) over k in {1..d}, found by scan."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    ratios = _falling_ratios(d)
    return _scan_argmax({k: ratios[k] * (k / 12 + 0.5) for k in range(1, d + 1)})


def g_d(d: int, k: int) -> float:
    """d!/(d^{k-1}(d-k+1)!) (k/12 + 1/2 + 1/(k+1))."""
    _check_k(d, k)
    return _falling_ratio(d, k) * (k / 12 + 0.5 + 1 / (k + 1))


def g_argmax(d: int) -> int:
    """Smallest maximizer of g_d(d, .) over k in {2..d}.

    The coefficient bound only uses k >= 2; at k = 1 the value is 13/12
    for every d.
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    ratios = _falling_ratios(d)
    return _scan_argmax({k: ratios[k] * (k / 12 + 0.5 + 1 / (k + 1)) for k in range(2, d + 1)})


def k0(d: int) -> int:
    """min(-3 + ceil(sqrt(16 + d)), 1 + ceil(0.0544 d))."""
    slope = get_constants().lemma26_slope
    return min(-3 + math.isqrt(16 + d - 1) + 1, 1 + math.ceil(slope * d))


def u_of_k(k: int, d: int | None = None) -> float:
    """((k+1)/(k+2)) ((k^2+9k+26)/(k^2+7k+18)); does not depend on d."""
    if k < 1 or (d is not None and k >= d):
        raise DomainError(f"need 1 <= k < d, got k={k}, d={d}")
    if d is None:
        return (k + 1) / (k + 2) * (k * k + 9 * k + 26) / (k * k + 7 * k + 18)
    return d / (d - k + 1) * h_of_k(k, d)


def h_of_k(k: int, d: int) -> float:
    """Ratio g_d(k+1)/g_d(k) = ((d-k+1)/d) u(k)."""
    if not 1 <= k < d:
        raise DomainError(f"need 1 <= k < d, got k={k}, d={d}")
    return (d - k + 1) / d * (k + 1) / (k + 2) * (k * k + 9 * k + 26) / (k * k + 7 * k + 18)


def f0(k: int) -> float:
    """1/(k+1) + 1/2 + k/12."""
    return 1 / (k + 1) + 0.5 + k / 12


def g_tilde(d: int, k: int) -> float:
    """f0(k) / 1.1^{d-101}."""
    c = get_constants()
    return f0(k) * math.exp(-(d - c.bd_threshold) * math.log(c.bd_base))


# ---------------------------------------------------------------------------
# Coefficient checks
# ---------------------------------------------------------------------------


def a_coeff(d: int, k: int) -> Fraction:
    """C(d, k+1) + (d/2) C(d, k) + (d^2/12) C(d, k-1), exactly."""
    if d < 4 or not 2 <= k <= d - 2:
        raise DomainError(f"need d >= 4 and 2 <= k <= d-2, got d={d}, k={k}")
    return (
        Fraction(math.comb(d, k + 1))
        + Fraction(d * math.comb(d, k), 2)
        + Fraction(d * d * math.comb(d, k - 1), 12)
    )


def A_coeff(d: int, k: int) -> Fraction:
    """k! a_coeff(d, k) / d^{k+1}, exactly."""
    return a_coeff(d, k) * math.factorial(k) / d ** (k + 1)


def check_a_coefficients(d_min: int = 4, d_max: int = EXACT_LIMIT) -> CheckReport:
    """Check A_coeff(d, k) <= 1 and A_coeff(d, k) < g_d(d, k) on a range of d."""
    report = CheckReport("coefficients")
    worst = (Fraction(0), None)
    above_g = None
    for d in range(d_min, d_max + 1):
        for k in range(2, d - 1):
            value = A_coeff(d, k)
            if value > worst[0]:
                worst = (value, (d, k))
            if above_g is None and not value < g_d(d, k):
                above_g = (d, k)
    report.add(
        f"A_(d-k) <= 1 for all {d_min} <= d <= {d_max}",
        worst[0] <= 1,
        f"max {float(worst[0]):.10f} at (d, k) = {worst[1]}",
    )
    report.add(
        "A_(d-k) < g_d(k)",
        above_g is None,
        "" if above_g is None else f"violated at (d, k) = {above_g}",
    )
    return report


def check_large_d(d_max: int = 300) -> CheckReport:
    """Reproduce the inequalities used for d > 101.

    (i) 1.1^{-k+1} f0(k) < 1 for k = 2..39; (ii) 1.1^{-k+1} <= 1/k for
    40 <= k <= 200; (iii) g_tilde(d, k0(d)) <= 1 for 103 <= d <= d_max;
    (iv) the d = 102 case, where 1.1^{-1} g_d(102, k_max) <= 1 and the
    largest A_(102-k) stays below 1.01.
    """
    if d_max < 102:
        raise DomainError(f"d_max must be >= 102, got {d_max}")
    base = get_constants().bd_base
    report = CheckReport("large d")

    bad = [k for k in range(2, 40) if not base ** (-k + 1) * f0(k) < 1]
    report.add("1.1^(-k+1) f0(k) < 1 for k = 2..39", not bad, f"failing k: {bad}" if bad else "")

    bad = [k for k in range(40, 201) if not base ** (-k + 1) <= 1 / k]
    report.add("1.1^(-k+1) <= 1/k for k = 40..200", not bad, f"failing k: {bad}" if bad else "")

    bad = [d for d in range(103, d_max + 1) if not g_tilde(d, k0(d)) <= 1]
    report.add(
        f"g~_d(k0(d)) <= 1 for d = 103..{d_max}",
        not bad,
        f"g~_103(k0(103)) = {g_tilde(103, k0(103)):.6f}" if not bad else f"failing d: {bad[:10]}",
    )
    report.add(
        "g~_103(k0(103)) < 0.999",
        g_tilde(103, k0(103)) < 0.999,
        f"k0(103) = {k0(103)}",
    )

    k_max = g_argmax(102)
    g_max = g_d(102, k_max)
    a_max = max(A_coeff(102, k) for k in range(2, 101))
    report.add("k_max(102) = 7", k_max == 7, f"scan gives {k_max}")
    report.add(
        "g_102(k_max) / 1.1 <= 1",
        g_max / base <= 1,
        f"g_102({k_max}) = {g_max:.6f}",
    )
    report.add("max_k A_(102-k) < 1.01", a_max < Fraction(101, 100), f"max = {float(a_max):.6f}")
    return report


def _bd_factor_exact(d: int) -> Fraction:
    c = get_constants()
    return max(Fraction(1), Fraction(repr(c.bd_base)) ** (d - c.bd_threshold))


def _coefficient_checks_exact(d: int) -> list[tuple[str, bool, str]]:
    fact = math.factorial
    rows = []

    lhs = Fraction(d * d, 12) + 1
    rhs = Fraction(d**d, fact(d))
    rows.append(("p=0: d^2/12 + 1 <= d^d/d!", lhs <= rhs, f"{float(lhs):.6g} <= {float(rhs):.6g}"))

    lhs = Fraction(d * d, 2) + Fraction(d**3 * (d - 1), 24) + 1
    rhs = Fraction(d**d, fact(d - 1))
    rows.append((
        "p=1: d^2/2 + d^3(d-1)/24 + 1 <= d^d/(d-1)!",
        lhs <= rhs,
        f"{float(lhs):.6g} <= {float(rhs):.6g}",
    ))

    if d >= 3:
        lhs = Fraction(d ** (d - 1), 2 * fact(d - 2)) + Fraction(d**d, 2 * fact(d - 1))
        rhs = Fraction(d**d, fact(d - 1))
        rows.append((
            "p=d-1: d^(d-1)/(2(d-2)!) + d^d/(2(d-1)!) < d^d/(d-1)!",
            lhs < rhs,
            f"ratio {float(lhs / rhs):.6f}",
        ))

    common = Fraction(d ** (d - 1), fact(d - 1))
    lhs = _bd_factor_exact(d - 1) * common
    rhs = _bd_factor_exact(d) * common
    rows.append(("p=d: b_(d-1) d^(d-1)/(d-1)! <= b_d d^(d-1)/(d-1)!", lhs <= rhs, f"{float(lhs):.6g} <= {float(rhs):.6g}"))
    return rows


def _coefficient_checks_log(d: int) -> list[tuple[str, bool, str]]:
    lg = math.lgamma

    margin = math.log1p(_FLOAT_MARGIN)
    rows = []

    log_rhs = d * math.log(d) - lg(d + 1)
    rows.append(("p=0: d^2/12 + 1 <= d^d/d!", math.log(d * d / 12 + 1) <= log_rhs + margin, "log-space"))

    log_rhs = d * math.log(d) - lg(d)
    lhs = d * d / 2 + d**3 * (d - 1) / 24 + 1
    rows.append(("p=1: d^2/2 + d^3(d-1)/24 + 1 <= d^d/(d-1)!", math.log(lhs) <= log_rhs + margin, "log-space"))

    term1 = log_bd_factor(d - 2) + (d - 1) * math.log(d) - math.log(2) - lg(d - 1)
    term2 = log_bd_factor(d - 1) + d * math.log(d) - math.log(2) - lg(d)
    log_lhs = max(term1, term2) + math.log1p(math.exp(-abs(term1 - term2)))
    log_rhs = log_bd_factor(d) + d * math.log(d) - lg(d)
    rows.append(("p=d-1: d^(d-1)/(2(d-2)!) + d^d/(2(d-1)!) < d^d/(d-1)!", log_lhs < log_rhs + margin, "log-space"))

    rows.append(("p=d: b_(d-1) d^(d-1)/(d-1)! <= b_d d^(d-1)/(d-1)!", log_bd_factor(d - 1) <= log_bd_factor(d) + margin, "log-space"))
    return rows


def check_small_powers(d: int) -> CheckReport:
    """Coefficient comparisons for the powers p = 0, 1, d-1 and d.

    The p = d-1 comparison collects the (1/delta)^{d-1} terms of both
    expansions; b_m stands for bd_factor(m).
    """
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    rows = _coefficient_checks_exact(d) if d <= EXACT_LIMIT else _coefficient_checks_log(d)
    report = CheckReport(f"small powers d={d}")
    for name, passed, detail in rows:
        report.add(name, passed, detail)
    return report


def check_argmax_lemmas(d_max: int = 500) -> CheckReport:
    """Compare scanned maximizers with their closed-form bounds for 2 <= d <= d_max."""
    report = CheckReport("maximizers")
    slope = get_constants().lemma26_slope
    bad_f = [d for d in range(2, d_max + 1) if lemma25_argmax(d) != lemma25_formula(d)]
    report.add(
        f"argmax f = -3 + ceil(sqrt(16+d)) for d = 2..{d_max}",
        not bad_f,
        f"failing d: {bad_f[:10]}" if bad_f else "",
    )
    bad_g = [
        d for d in range(2, d_max + 1)
        if g_argmax(d) > min(lemma25_formula(d), 1 + math.ceil(slope * d))
    ]
    report.add(
        f"argmax g <= min(-3 + ceil(sqrt(16+d)), 1 + ceil(0.0544 d)) for d = 2..{d_max}",
        not bad_g,
        f"failing d: {bad_g[:10]}" if bad_g else "",
    )
    u_values = {k: u_of_k(k) for k in range(1, 101)}
    k_u = _scan_argmax(u_values)
    report.add("argmax u = 7 on 1..100", k_u == 7, f"u(7) = {u_values[7]:.8f}")
    return report


def check_theorem24(d_max: int = 300) -> CheckReport:
    """Run every computer check behind the general-d bracketing bound."""
    report = CheckReport("general-d bound")
    report.extend(check_a_coefficients())
    report.extend(check_argmax_lemmas())
    report.extend(check_large_d(d_max))
    failing = [d for d in range(2, d_max + 1) if not check_small_powers(d).passed]
    report.add(
        f"small-power coefficients for d = 2..{d_max}",
        not failing,
        f"failing d: {failing[:10]}" if failing else "",
    )
    return report
