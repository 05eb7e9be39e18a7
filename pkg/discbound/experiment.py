"""Seeded replication experiments confronting empirical D* with the probabilistic bounds."""

import csv
import logging
import math
from dataclasses import astuple, dataclass, fields
from typing import TextIO

from .errors import DomainError
from .pointset import format_real
from .probbounds import expected_disc_bound, fraction_below, mean_and_stderr, replicate_dstar, threshold, thm31_probability
from .sampling import SamplerSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentRecord:
    """One replication judged against one threshold coefficient."""
    rep: int
    sampler: str
    d: int
    n: int
    seed: int
    dstar: float
    threshold_c: float
    below: bool


@dataclass(frozen=True)
class ExperimentSummary:
    """Empirical statistics next to the bounds they are checked against, per threshold."""
    sampler: str
    d: int
    n: int
    reps: int
    threshold_c: float
    bound_probability: float  # nan when d < 2
    empirical_fraction: float
    wilson_low: float
    wilson_high: float
    mean_dstar: float
    stderr_dstar: float
    expected_bound: float

    @property
    def probability_ok(self) -> bool:
        return math.isnan(self.bound_probability) or self.empirical_fraction >= self.bound_probability

    @property
    def mean_ok(self) -> bool:
        return self.mean_dstar <= self.expected_bound


@dataclass
class ExperimentResult:
    records: list[ExperimentRecord]
    summaries: list[ExperimentSummary]


def run_experiment(spec: SamplerSpec, reps: int, c_values, rho: float = 0.0) -> ExperimentResult:
    """Draw ``reps`` point sets from ``spec`` and compare D* against each c in ``c_values``.

    Records are ordered by replication, then by c. Replication i always
    uses substream i, so results do not depend on the worker count.
    """
    c_values = [float(c) for c in c_values]
    if not c_values:
        raise DomainError("at least one threshold coefficient is required")
    if any(c <= 0 for c in c_values):
        raise DomainError(f"threshold coefficients must be > 0, got {c_values}")

    dstar = replicate_dstar(spec, reps)
    records = [
        ExperimentRecord(rep, spec.kind, spec.d, spec.n, spec.seed, float(value), c,
                         bool(value <= threshold(c, spec.d, spec.n)))
        for rep, value in enumerate(dstar)
        for c in c_values
    ]

    mean, stderr = mean_and_stderr(dstar)
    expected = expected_disc_bound(spec.d, spec.n).simple * math.sqrt(spec.d / spec.n)
    summaries = []
    for c in c_values:
        estimate = fraction_below(dstar, c, spec.d, spec.n)
        bound = thm31_probability(c, spec.d, rho) if spec.d >= 2 else math.nan
        summaries.append(ExperimentSummary(
            sampler=spec.kind,
            d=spec.d,
            n=spec.n,
            reps=reps,
            threshold_c=c,
            bound_probability=bound,
            empirical_fraction=estimate.fraction,
            wilson_low=estimate.wilson_low,
            wilson_high=estimate.wilson_high,
            mean_dstar=mean,
            stderr_dstar=stderr,
            expected_bound=expected,
        ))
    logger.info("experiment %s d=%d N=%d reps=%d: mean D* %.6f", spec.kind, spec.d, spec.n, reps, mean)
    return ExperimentResult(records, summaries)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def _write_rows(rows, cls, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f.name for f in fields(cls)])
    for row in rows:
        writer.writerow([_cell(v) for v in astuple(row)])


def write_records_csv(records: list[ExperimentRecord], out: TextIO) -> None:
    """Header ``rep,sampler,d,n,seed,dstar,threshold_c,below`` then one row per record."""
    _write_rows(records, ExperimentRecord, out)


def write_summary_csv(summaries: list[ExperimentSummary], out: TextIO) -> None:
    _write_rows(summaries, ExperimentSummary, out)
