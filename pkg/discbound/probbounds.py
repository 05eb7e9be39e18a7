"""Probabilistic and expectation bounds on the star-discrepancy of sampling schemes.

Every formula is evaluated from the constants in ``data/constants.json``
(see constants.py); the default tail bound reads

    P(D*_N <= c sqrt(d/N)) >= 1 - exp(-(alpha c^2 - beta - rho) d).

Empirical counterparts (fractions below a threshold, mean D*) are computed
from seeded replications with the exact oracle.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import special, stats

from .bounds import log_bd_factor
from .constants import get_constants
from .discrepancy import star_disc_exact
from .errors import DomainError
from .pointset import WeightScheme, mask_to_subset
from .reports import CheckReport
from .sampling import SamplerSpec, draw
from .settings import get_workers

logger = logging.getLogger(__name__)

# exp() of anything above this overflows a double
_EXP_LIMIT = 700.0


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def _one_minus_exp(exponent: float) -> float:
    """1 - e^{-x}, clamped to [0, 1]."""
    if exponent <= 0.0:
        return 0.0
    return _clamp(-math.expm1(-exponent))


# ============================================================================
# Chaining parameters and the main tail bound
# ============================================================================


@dataclass(frozen=True)
class ChainingParams:
    mu: int
    tau_mu: float
    c_mu: float
    c1: float
    rho: float
    alpha: float
    beta: float


def chaining_params(mu: int | None = None, tau_mu: float | None = None, rho: float = 0.0,
                    alpha: float | None = None, beta: float | None = None) -> ChainingParams:
    """Derive c_mu and c1 from (mu, tau_mu); alpha and beta default to the configured constants.

    Raises:
        DomainError: If mu < 2, tau_mu <= 0 or rho < 0.
    """
    c = get_constants()
    mu = c.mu if mu is None else mu
    tau_mu = c.tau_mu if tau_mu is None else tau_mu
    if mu < 2:
        raise DomainError(f"mu must be >= 2, got {mu}")
    if tau_mu <= 0:
        raise DomainError(f"tau_mu must be > 0, got {tau_mu}")
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    c_mu = 1.0 / (1.0 - math.sqrt((mu + 1) / (2 * mu)))
    c1 = math.sqrt(4 * tau_mu * (1 + 1 / (3 * c_mu)))
    return ChainingParams(
        mu=mu,
        tau_mu=tau_mu,
        c_mu=c_mu,
        c1=c1,
        rho=rho,
        alpha=c.alpha if alpha is None else alpha,
        beta=c.beta if beta is None else beta,
    )


def _check_thm31_args(d: int, rho: float) -> None:
    if d < 2:
        raise DomainError(f"the tail bound is stated for d >= 2, got {d}")
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")


def thm31_probability(c: float, d: int, rho: float = 0.0) -> float:
    """Lower bound on P(D*_N <= c sqrt(d/N)): max(0, 1 - exp(-(alpha c^2 - beta - rho) d))."""
    if c <= 0:
        raise DomainError(f"c must be > 0, got {c}")
    _check_thm31_args(d, rho)
    k = get_constants()
    return _one_minus_exp((k.alpha * c * c - k.beta - rho) * d)


def thm31_c_of_q(q: float, d: int, rho: float = 0.0) -> float:
    """Coefficient of sqrt(d/N) that holds with probability at least q."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    _check_thm31_args(d, rho)
    k = get_constants()
    return k.inverse_sqrt_alpha * math.sqrt(k.beta + rho - math.log1p(-q) / d)


def normal_cdf(x: float) -> float:
    """Standard normal CDF (scipy.special.ndtr)."""
    return float(special.ndtr(x))


class ExpectationBound(NamedTuple):
    """Coefficients c with E[D*_N] <= c sqrt(d/N)."""
    tight: float
    simple: float


def _phi_gap_term(a: float, b: float, scale: float) -> float:
    """exp(scale) * (Phi(a) - Phi(b)) for a > b, evaluated through upper-tail logs."""
    log_tail_b = float(special.log_ndtr(-b))
    log_tail_a = float(special.log_ndtr(-a))
    log_gap = log_tail_b + math.log1p(-math.exp(log_tail_a - log_tail_b))
    return math.exp(scale + log_gap)


def expected_disc_bound(d: int, n: int, alpha: float | None = None, beta: float | None = None) -> ExpectationBound:
    """Coefficients of the expectation bound for a sampling scheme with the default tail.

    ``tight`` keeps the Gaussian integral
    sqrt(beta/alpha) (1 + sqrt(pi/(beta d)) e^{beta d} (Phi(sqrt(2 alpha N)) - Phi(sqrt(2 beta d)))),
    ``simple`` bounds it by sqrt(beta/alpha) (1 + 1/(2 beta d)). When
    N/d <= beta/alpha the integral is empty and tight falls back to the
    smaller of simple and the trivial sqrt(N/d) (that is, E[D*] <= 1).
    """
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and N >= 1, got d={d}, N={n}")
    k = get_constants()
    alpha = k.alpha if alpha is None else alpha
    beta = k.beta if beta is None else beta
    if alpha <= 0 or beta <= 0:
        raise DomainError("alpha and beta must be > 0")

    root = math.sqrt(beta / alpha)
    simple = root * (1 + 1 / (2 * beta * d))
    a = math.sqrt(2 * alpha * n)
    b = math.sqrt(2 * beta * d)
    if a <= b:
        return ExpectationBound(tight=min(math.sqrt(n / d), simple), simple=simple)
    tight = root * (1 + math.sqrt(math.pi / (beta * d)) * _phi_gap_term(a, b, beta * d))
    return ExpectationBound(tight=tight, simple=simple)


def inverse_star_disc_bound(eps: float, d: int, c: float | None = None) -> int:
    """Upper bound ceil(C^2 d / eps^2) on the inverse star-discrepancy N*(eps, d).

    C defaults to the configured discrepancy constant. eps and C are read at
    their decimal values, so the ceiling is exact.

    Raises:
        DomainError: If eps is outside (0, 1], d < 1 or C <= 0.
    """
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    c = get_constants().discrepancy_constant if c is None else c
    if c <= 0:
        raise DomainError(f"C must be > 0, got {c}")
    return math.ceil(Fraction(repr(float(c))) ** 2 * d / Fraction(repr(float(eps))) ** 2)


# ============================================================================
# Bounds for schemes with the relaxed dependence condition
# ============================================================================


def _xi(n: int, d: int) -> float:
    return max(1.0, math.log(n / d))


def c0_bound_probability(c: float, d: int, n: int, rho: float = 0.0) -> float:
    """Probability that D*_N <= c sqrt((d/N) max(1, log(N/d)))."""
    if c <= 0:
        raise DomainError(f"c must be > 0, got {c}")
    if d < 1 or n < 1 or rho < 0:
        raise DomainError(f"need d, N >= 1 and rho >= 0, got d={d}, N={n}, rho={rho}")
    exponent = (
        -0.5 * (c * c - 1) * _xi(n, d) + rho + 1 + math.log(2 / c + 1) + log_bd_factor(d) / d
    ) * d
    if exponent > _EXP_LIMIT:
        return 0.0
    return _clamp(1 - 2 * math.exp(exponent))


def c0_eta(n: int, d: int) -> float:
    """eta(N, d) = 3.3 e sqrt(max(1, N / (2 d log(3.3 e))))."""
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and N >= 1, got d={d}, N={n}")
    base = get_constants().eta_scale * math.e
    return base * math.sqrt(max(1.0, n / (2 * d * math.log(base))))


def c0_theta_bound(theta: float, d: int, n: int, rho: float = 0.0) -> float:
    """Discrepancy level that holds with probability at least theta."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    eta = c0_eta(n, d)
    return math.sqrt(2 / n) * math.sqrt(d * math.log(eta) + rho * d + math.log(2 / (1 - theta)))


def c0_eta_condition(n: int, d: int) -> bool:
    """(eta/(b_d e) - 1) sqrt(log eta) > sqrt(2N/d) for the implemented eta."""
    eta = c0_eta(n, d)
    log_ratio = math.log(eta) - 1 - log_bd_factor(d)
    lhs = math.expm1(log_ratio) * math.sqrt(math.log(eta))
    return lhs > math.sqrt(2 * n / d)


# ============================================================================
# Weighted star-discrepancy
# ============================================================================


def _check_subset_size(d: int, u_size: int, n: int) -> None:
    if not 1 <= u_size <= d:
        raise DomainError(f"need 1 <= |u| <= d, got |u|={u_size}, d={d}")
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")


def weighted_bound_prop38(d: int, u_size: int, n: int, scale: float, beta: float) -> float:
    """Per-subset factor (before gamma_u) for projections with tail scale/sqrt(beta + log(1/(1-q))/|u|)."""
    _check_subset_size(d, u_size, n)
    inner = beta + 1 + math.log1p(1 / math.sqrt(2 * math.pi)) + math.log(d) \
        - (1 + 1 / (2 * u_size)) * math.log(u_size)
    return scale / math.sqrt(n) * math.sqrt(inner) * math.sqrt(u_size)


def weighted_bound_cor39(d: int, u_size: int, n: int) -> float:
    """Monte Carlo per-subset factor 0.7723/sqrt(N) sqrt(11.78864 + log d - (1 + 1/(2|u|)) log|u|) sqrt(|u|)."""
    _check_subset_size(d, u_size, n)
    k = get_constants()
    inner = k.weighted_offset + math.log(d) - (1 + 1 / (2 * u_size)) * math.log(u_size)
    return k.inverse_sqrt_alpha / math.sqrt(n) * math.sqrt(inner) * math.sqrt(u_size)


def weighted_bound(weights: WeightScheme, n: int) -> tuple[float, tuple[int, ...]]:
    """max over subsets of gamma_u times the Monte Carlo factor, with the maximizing subset (1-based)."""
    best, best_subset = 0.0, ()
    for mask, gamma in weights.positive_subsets():
        subset = mask_to_subset(mask)
        value = gamma * weighted_bound_cor39(weights.d, len(subset), n)
        if value > best:
            best, best_subset = value, tuple(j + 1 for j in subset)
    return best, best_subset


def weighted_prob_cor310(c: float, d: int, rho: float = 0.0) -> float:
    """2 - (1 + exp(-(alpha c^2 - beta - rho)))^d, clamped to [0, 1]."""
    if c <= 0 or d < 1 or rho < 0:
        raise DomainError(f"need c > 0, d >= 1, rho >= 0, got c={c}, d={d}, rho={rho}")
    k = get_constants()
    x = k.alpha * c * c - k.beta - rho
    if -x > _EXP_LIMIT:
        return 0.0
    log_power = d * math.log1p(math.exp(-x))
    # (1 + e^{-x})^d >= 2 leaves nothing to bound
    if log_power >= math.log(2.0):
        return 0.0
    return _clamp(1.0 - math.expm1(log_power))


def weighted_theta_coeff(theta: float, d: int, rho: float = 0.0) -> float:
    """The c for which weighted_prob_cor310(c, d, rho) = theta."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if d < 1 or rho < 0:
        raise DomainError(f"need d >= 1 and rho >= 0, got d={d}, rho={rho}")
    k = get_constants()
    root_gap = math.expm1(math.log(2 - theta) / d)
    return math.sqrt((rho + k.beta - math.log(root_gap)) / k.alpha)


# ============================================================================
# Consistency checks
# ============================================================================


@dataclass(frozen=True)
class Eq2Evaluation:
    """Both sides of the closing inequality of the chaining argument."""
    mu: int
    tau_mu: float
    d: int
    rho: float
    sigma: float
    zeta: float
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs


def eq2_check(mu: int | None = None, tau_mu: float | None = None, d: int = 2, rho: float = 0.0) -> Eq2Evaluation:
    """Evaluate 1 + e^{-X d} / (1 - e^{-Y d}) < sqrt(pi d / 2), where

    sigma = mu - log(2^mu + 1) - 1 - log(b_d)/d - log(2)/d,
    zeta = log(1 + 2^{-mu-1}) + log 2 + log(2)/d + log(b_d)/d,
    X = (mu + rho - sigma)(mu tau_mu - 1) + (1 - log 2) mu - 1 - zeta - sigma,
    Y = (mu + rho - sigma) tau_mu - log 2.

    A non-positive Y leaves the denominator <= 0 and lhs is reported as inf.
    """
    k = get_constants()
    mu = k.mu if mu is None else mu
    tau_mu = k.tau_mu if tau_mu is None else tau_mu
    if mu < 2 or tau_mu <= 0 or d < 1 or rho < 0:
        raise DomainError(f"invalid arguments mu={mu}, tau_mu={tau_mu}, d={d}, rho={rho}")
    log2 = math.log(2)
    log_bd = log_bd_factor(d)
    sigma = mu - math.log(2.0 ** mu + 1) - 1 - log_bd / d - log2 / d
    zeta = math.log1p(2.0 ** (-mu - 1)) + log2 + log2 / d + log_bd / d
    spread = mu + rho - sigma
    x = spread * (mu * tau_mu - 1) + (1 - log2) * mu - 1 - zeta - sigma
    y = spread * tau_mu - log2
    if y <= 0:
        lhs = math.inf
    else:
        lhs = 1 + math.exp(min(-x * d, _EXP_LIMIT)) / -math.expm1(-y * d)
    return Eq2Evaluation(mu, tau_mu, d, rho, sigma, zeta, lhs, math.sqrt(math.pi * d / 2))


def eq2_grid(d_values=range(2, 21), rho_values=(0.0, 0.5, 1.0),
             mu: int | None = None, tau_mu: float | None = None) -> list[Eq2Evaluation]:
    return [eq2_check(mu, tau_mu, d, rho) for d in d_values for rho in rho_values]


def constants_web() -> CheckReport:
    """Recompute every derived constant from alpha and beta and compare with its printed value."""
    k = get_constants()
    report = CheckReport("constant consistency")

    root = math.sqrt(k.beta / k.alpha)
    report.add("sqrt(beta/alpha) = 2.49676", abs(root - 2.49676) <= 1e-5, f"{root:.7f}")

    inv = 1 / math.sqrt(k.alpha)
    report.add("1/sqrt(alpha) = 0.77225", abs(inv - 0.77225) <= 5e-5, f"{inv:.7f}")
    report.add("printed 0.7723 >= 1/sqrt(alpha)", k.inverse_sqrt_alpha >= inv,
               f"{k.inverse_sqrt_alpha} vs {inv:.7f}")

    offset = k.beta + 1 + math.log1p(1 / math.sqrt(2 * math.pi))
    report.add("beta + 1 + log(1 + 1/sqrt(2 pi)) = 11.78864",
               abs(offset - k.weighted_offset) <= 1e-5, f"{offset:.7f}")

    p25 = thm31_probability(2.5, 2)
    report.add("P(c=2.5, d=2) = 0.0528", abs(p25 - 0.0528) <= 5e-4, f"{p25:.6f}")
    p3 = thm31_probability(3.0, 2)
    report.add("P(c=3, d=2) >= 0.9999", p3 >= 0.9999, f"{p3:.6f}")

    s2 = expected_disc_bound(2, 1).simple
    report.add("expectation coefficient d=2 = 2.55648", abs(s2 - 2.55648) <= 1e-4, f"{s2:.6f}")
    s3 = expected_disc_bound(3, 1).simple
    report.add("expectation coefficient d=3 = 2.53657", abs(s3 - 2.53657) <= 1e-4, f"{s3:.6f}")
    worst = max(expected_disc_bound(d, 1).simple for d in range(3, 201))
    report.add("expectation coefficient d>=3 <= 2.53657", worst <= 2.53657 + 1e-4, f"{worst:.6f}")
    far = expected_disc_bound(10_000, 1).simple
    report.add("expectation coefficient -> sqrt(beta/alpha)", abs(far - root) <= 1e-3, f"{far:.6f}")
    return report


# ============================================================================
# Empirical estimates
# ============================================================================


class ProbabilityEstimate(NamedTuple):
    fraction: float
    successes: int
    reps: int
    wilson_low: float
    wilson_high: float


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError(f"need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}")
    ci = stats.binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def replicate_dstar(spec: SamplerSpec, reps: int) -> np.ndarray:
    """Exact D* of replications 0..reps-1, replication i drawn from substream i."""
    if reps < 1:
        raise DomainError(f"reps must be >= 1, got {reps}")

    def one(rep: int) -> float:
        return star_disc_exact(draw(spec, stream=rep)).value

    with ThreadPoolExecutor(max_workers=get_workers()) as pool:
        values = np.array(list(pool.map(one, range(reps))), dtype=float)
    logger.info("computed D* for %d %s replications (d=%d, N=%d)", reps, spec.kind, spec.d, spec.n)
    return values


def threshold(c: float, d: int, n: int) -> float:
    """The discrepancy level c sqrt(d/N)."""
    return c * math.sqrt(d / n)


def fraction_below(dstar: np.ndarray, c: float, d: int, n: int) -> ProbabilityEstimate:
    successes = int(np.count_nonzero(dstar <= threshold(c, d, n)))
    low, high = wilson_interval(successes, dstar.size)
    return ProbabilityEstimate(successes / dstar.size, successes, int(dstar.size), low, high)


def mean_and_stderr(dstar: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(dstar))
    stderr = float(np.std(dstar, ddof=1) / math.sqrt(dstar.size)) if dstar.size > 1 else 0.0
    return mean, stderr


def estimate_probability(spec: SamplerSpec, c: float, reps: int) -> ProbabilityEstimate:
    """Fraction of replications with D* <= c sqrt(d/N), with its Wilson interval."""
    if c <= 0:
        raise DomainError(f"c must be > 0, got {c}")
    return fraction_below(replicate_dstar(spec, reps), c, spec.d, spec.n)


def estimate_expectation(spec: SamplerSpec, reps: int) -> tuple[float, float]:
    """Sample mean of D* over the replications and its standard error."""
    return mean_and_stderr(replicate_dstar(spec, reps))
