"""Command-line interface for discbound."""

import argparse
import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .bounds import bound_d2, bound_general, bracketing_1d, check_theorem24, evaluate_bounds
from .cover import build_cover_nd, read_cover_csv, validate_cover, write_cover_csv
from .discrepancy import star_disc_exact, star_disc_upper_cover, weighted_star_disc
from .errors import DiscboundError, DomainError, FileFormatError, InfeasibleSizeError
from .exactmath import parse_r_grid, verify_gfi
from .experiment import run_experiment, write_records_csv, write_summary_csv
from .pointset import WeightScheme, format_real, read_points_csv, read_weights_csv, write_points_csv
from .probbounds import constants_web, eq2_grid, inverse_star_disc_bound
from .reports import CheckReport
from .sampling import SAMPLERS, SamplerSpec, draw
from .settings import set_cover_cap, set_oracle_cap, set_workers

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


# ============================================================================
# Argument types
# ============================================================================


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {value}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _delta_list(text: str) -> list[float]:
    values = _float_list(text)
    bad = [v for v in values if not 0.0 < v < 1.0]
    if bad:
        raise argparse.ArgumentTypeError(f"delta values must lie in (0, 1), got {bad}")
    return values


def _dimension_list(text: str) -> list[int]:
    """Parse ``"2"``, ``"2,3,5"`` or an inclusive range ``"1:10"``."""
    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be a nonempty list of integers >= 1, got {text!r}")
    return values


# ============================================================================
# Output helpers
# ============================================================================


@contextmanager
def _csv_target(out: Path | None):
    """Yield (stream for CSV, stream for status lines)."""
    if out is None:
        yield sys.stdout, sys.stderr
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        yield f, sys.stdout


def _print_report(report: CheckReport, file=None) -> None:
    file = file or sys.stdout
    print(f"\n{report.title}", file=file)
    print("-" * 60, file=file)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        detail = f"  ({check.detail})" if check.detail else ""
        print(f"{check.name}: {status}{detail}", file=file)


def _matching_bound(d: int, delta: float) -> float:
    if d == 1:
        return float(bracketing_1d(delta))
    if d == 2:
        return bound_d2(delta)
    return bound_general(d, delta)


# ============================================================================
# Subcommands
# ============================================================================


def cmd_faulhaber_verify(args) -> int:
    grid = parse_r_grid(args.r_grid)
    report = verify_gfi(args.n_max, args.j_max, grid)
    print(f"Checked {report.checked} triples (n <= {args.n_max}, j <= {args.j_max}, {len(grid)} shifts)")
    for triple in report.equality_cases:
        print(f"equality: n={triple.n} j={triple.j} r={triple.r}")
    if report.counterexample is not None:
        c = report.counterexample
        print(f"FAIL: inequality violated at n={c.n} j={c.j} r={c.r}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print("PASS")
    return EXIT_OK


def cmd_bounds_table(args) -> int:
    with _csv_target(args.out) as (stream, _status):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["d", "delta", "gnewuch", "pw", "d2", "general"])
        for d in args.d:
            for delta in args.delta:
                values = {r.name: r.value for r in evaluate_bounds(d, delta)}
                writer.writerow([
                    d,
                    format_real(delta),
                    format_real(values["gnewuch"]),
                    format_real(values["pw"]),
                    format_real(values["d2"]) if "d2" in values else "",
                    format_real(values["general"]),
                ])
    return EXIT_OK


def cmd_bounds_check_theorem24(args) -> int:
    report = check_theorem24(args.d_max)
    _print_report(report)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_bounds_check_constants(args) -> int:
    report = constants_web()
    _print_report(report)

    print("\nchaining inequality (mu=12, tau_mu=0.0871)")
    print(f"{'d':>4} {'rho':>5} {'sigma':>10} {'zeta':>10} {'lhs':>12} {'rhs':>10}  holds")
    print("-" * 62)
    for ev in eq2_grid(range(2, args.eq2_d_max + 1)):
        print(f"{ev.d:>4} {ev.rho:>5.2f} {ev.sigma:>10.6f} {ev.zeta:>10.6f} {ev.lhs:>12.6f} {ev.rhs:>10.6f}  {ev.holds}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_cover_build(args) -> int:
    cover = build_cover_nd(args.d, args.delta)
    bound = _matching_bound(args.d, args.delta)
    with _csv_target(args.out) as (stream, status):
        write_cover_csv(cover, stream)
        print(f"cover d={args.d} delta={format_real(args.delta)}: {len(cover)} brackets, bound {bound:.2f}", file=status)
        if args.skip_validation:
            return EXIT_OK
        result = validate_cover(cover, args.n_random, args.seed)
        if result.passed:
            print(f"PASS ({result.points_checked} points checked, max weight {result.max_weight:.6g})", file=status)
            return EXIT_OK
        print(f"FAIL: witness {result.witness}, heavy brackets {result.heavy_brackets[:10]}", file=status)
    return EXIT_CHECK_FAILED


def cmd_cover_verify(args) -> int:
    cover = read_cover_csv(args.cover)
    result = validate_cover(cover, args.n_random, args.seed)
    print(f"cover d={cover.d} delta={format_real(cover.delta)}: {result.count} brackets, "
          f"max weight {result.max_weight:.6g}, {result.points_checked} points checked")
    if result.passed:
        print("PASS")
        return EXIT_OK
    if not result.weight_ok:
        print(f"FAIL: brackets heavier than delta: {result.heavy_brackets[:10]}", file=sys.stderr)
    if not result.coverage_ok:
        print(f"FAIL: {result.uncovered} uncovered points, witness {result.witness}", file=sys.stderr)
    return EXIT_CHECK_FAILED


def _format_witness(witness) -> str:
    if witness is None:
        return "-"
    return "(" + ", ".join(format_real(x) for x in witness) + ")"


def cmd_disc_exact(args) -> int:
    points = read_points_csv(args.points)
    result = star_disc_exact(points)
    print(f"exact {format_real(result.value)}")
    print(f"witness {_format_witness(result.witness)} ({result.count_rule})")
    return EXIT_OK


def cmd_disc_upper(args) -> int:
    points = read_points_csv(args.points)
    if args.cover is not None:
        cover = read_cover_csv(args.cover).delta_cover()
    else:
        cover = build_cover_nd(points.d, args.delta).delta_cover()
    bound = star_disc_upper_cover(points, cover)
    print(f"lower {format_real(bound.lower.value)}")
    print(f"upper {format_real(bound.upper.value)}")
    print(f"witness {_format_witness(bound.upper.witness)}")
    return EXIT_OK


def cmd_disc_weighted(args) -> int:
    points = read_points_csv(args.points)
    if args.product_weights is not None:
        if len(args.product_weights) != points.d:
            raise DomainError(f"{len(args.product_weights)} product weights given for d={points.d}")
        weights = WeightScheme.from_product(args.product_weights)
    else:
        weights = read_weights_csv(args.weights, points.d)
    mode = "exact" if args.delta is None else args.delta
    result = weighted_star_disc(points, weights, mode)
    subset = ",".join(str(j) for j in result.subset) if result.subset else "-"
    print(f"weighted {format_real(result.value)}")
    print(f"subset {{{subset}}} mode {result.mode}")
    return EXIT_OK


def cmd_disc_inverse(args) -> int:
    n_points = inverse_star_disc_bound(args.eps, args.d, args.c)
    print(f"points {n_points}")
    return EXIT_OK


def cmd_experiment_run(args) -> int:
    spec = SamplerSpec(args.sampler, args.d, args.n, args.seed)
    result = run_experiment(spec, args.reps, args.c, args.rho)
    if args.out is not None:
        with _csv_target(args.out) as (stream, _status):
            write_records_csv(result.records, stream)
    write_summary_csv(result.summaries, sys.stdout)

    failed = [s for s in result.summaries if not (s.probability_ok and s.mean_ok)]
    for s in failed:
        print(f"FAIL: c={format_real(s.threshold_c)} fraction {s.empirical_fraction} vs bound "
              f"{s.bound_probability}, mean {s.mean_dstar} vs {s.expected_bound}", file=sys.stderr)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_sample(args) -> int:
    points = draw(SamplerSpec(args.sampler, args.d, args.n, args.seed), stream=args.stream)
    with _csv_target(args.out) as (stream, _status):
        write_points_csv(points, stream)
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discbound",
        description="discbound - bracketing covers and star-discrepancy bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  discbound faulhaber verify --n-max 50 --j-max 20
  discbound bounds table --d 2 --delta 0.1
  discbound bounds check-theorem24
  discbound cover build --d 2 --delta 0.5 --out cover.csv
  discbound cover verify --cover cover.csv
  discbound sample --sampler mc --d 2 --n 64 --seed 1 --out points.csv
  discbound disc exact --points points.csv
  discbound disc inverse --d 10 --eps 0.1
  discbound experiment run --sampler mc --d 2 --n 64 --reps 1000 --c 2.5,3
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    parser.add_argument("--oracle-cap", type=_positive_int, help="Corner evaluations allowed in the exact oracle")
    parser.add_argument("--cover-cap", type=_positive_int, help="Brackets allowed in a general-d cover")
    parser.add_argument("--workers", type=_positive_int, help="Worker threads for replications and validation")
    commands = parser.add_subparsers(dest="command", required=True)

    # faulhaber
    faulhaber = commands.add_parser("faulhaber", help="Shifted Faulhaber inequality")
    faulhaber_cmds = faulhaber.add_subparsers(dest="action", required=True)
    verify = faulhaber_cmds.add_parser("verify", help="Exact check on a grid of (n, j, r)")
    verify.add_argument("--n-max", type=_positive_int, default=50)
    verify.add_argument("--j-max", type=_positive_int, default=20)
    verify.add_argument("--r-grid", default="step:1/8", help="'step:1/8' or a list such as '0,1/4,1/2'")
    verify.set_defaults(handler=cmd_faulhaber_verify)

    # bounds
    bounds = commands.add_parser("bounds", help="Bracketing-number bounds")
    bounds_cmds = bounds.add_subparsers(dest="action", required=True)
    table = bounds_cmds.add_parser("table", help="CSV of every closed-form bound")
    table.add_argument("--d", type=_dimension_list, required=True, help="'2', '2,3' or '1:10'")
    table.add_argument("--delta", type=_delta_list, required=True, help="Comma-separated tolerances")
    table.add_argument("--out", type=Path)
    table.set_defaults(handler=cmd_bounds_table)
    thm = bounds_cmds.add_parser("check-theorem24", help="Computer checks behind the general-d bound")
    thm.add_argument("--d-max", type=_positive_int, default=300)
    thm.set_defaults(handler=cmd_bounds_check_theorem24)
    consts = bounds_cmds.add_parser("check-constants", help="Consistency of the probabilistic constants")
    consts.add_argument("--eq2-d-max", type=_positive_int, default=20)
    consts.set_defaults(handler=cmd_bounds_check_constants)

    # cover
    cover = commands.add_parser("cover", help="Explicit bracketing covers")
    cover_cmds = cover.add_subparsers(dest="action", required=True)
    build = cover_cmds.add_parser("build", help="Construct and validate a cover")
    build.add_argument("--d", type=_positive_int, required=True)
    build.add_argument("--delta", type=_unit_interval, required=True)
    build.add_argument("--out", type=Path)
    build.add_argument("--n-random", type=_nonnegative_int, default=100_000)
    build.add_argument("--seed", type=_nonnegative_int, default=0)
    build.add_argument("--skip-validation", action="store_true")
    build.set_defaults(handler=cmd_cover_build)
    check = cover_cmds.add_parser("verify", help="Validate a cover file")
    check.add_argument("--cover", "--in", dest="cover", type=Path, required=True)
    check.add_argument("--n-random", type=_nonnegative_int, default=100_000)
    check.add_argument("--seed", type=_nonnegative_int, default=0)
    check.set_defaults(handler=cmd_cover_verify)

    # disc
    disc = commands.add_parser("disc", help="Star-discrepancy of a point file")
    disc_cmds = disc.add_subparsers(dest="action", required=True)
    exact = disc_cmds.add_parser("exact", help="Exact value by grid enumeration")
    exact.add_argument("--points", type=Path, required=True)
    exact.set_defaults(handler=cmd_disc_exact)
    upper = disc_cmds.add_parser("upper", help="Certified bracket from a delta-cover")
    upper.add_argument("--points", type=Path, required=True)
    source = upper.add_mutually_exclusive_group(required=True)
    source.add_argument("--cover", type=Path, help="Cover file written by 'cover build'")
    source.add_argument("--delta", type=_unit_interval, help="Build a cover at this tolerance")
    upper.set_defaults(handler=cmd_disc_upper)
    weighted = disc_cmds.add_parser("weighted", help="Weighted star-discrepancy")
    weighted.add_argument("--points", type=Path, required=True)
    weights = weighted.add_mutually_exclusive_group(required=True)
    weights.add_argument("--product-weights", type=_float_list, help="gamma_1,...,gamma_d")
    weights.add_argument("--weights", type=Path, help="File of 'u-bitmask,gamma_u' rows")
    weighted.add_argument("--delta", type=_unit_interval, help="Bound projections through covers instead of exactly")
    weighted.set_defaults(handler=cmd_disc_weighted)
    inverse = disc_cmds.add_parser("inverse", help="Points that suffice for a target discrepancy")
    inverse.add_argument("--d", type=_positive_int, required=True)
    inverse.add_argument("--eps", type=float, required=True, help="Target star-discrepancy in (0, 1]")
    inverse.add_argument("--c", type=float, help="Discrepancy constant (default from the constants file)")
    inverse.set_defaults(handler=cmd_disc_inverse)

    # experiment
    experiment = commands.add_parser("experiment", help="Seeded replication experiments")
    experiment_cmds = experiment.add_subparsers(dest="action", required=True)
    run = experiment_cmds.add_parser("run", help="Empirical D* against the probabilistic bounds")
    run.add_argument("--sampler", choices=sorted(SAMPLERS), default="mc")
    run.add_argument("--d", type=_positive_int, required=True)
    run.add_argument("--n", type=_positive_int, required=True)
    run.add_argument("--reps", type=_positive_int, default=1000)
    run.add_argument("--seed", type=_nonnegative_int, default=0)
    run.add_argument("--c", type=_float_list, default=[2.5, 3.0], help="Threshold coefficients")
    run.add_argument("--rho", type=float, default=0.0)
    run.add_argument("--out", type=Path, help="Per-replication CSV")
    run.set_defaults(handler=cmd_experiment_run)

    # sample
    sample = commands.add_parser("sample", help="Write a seeded point set")
    sample.add_argument("--sampler", choices=sorted(SAMPLERS), default="mc")
    sample.add_argument("--d", type=_positive_int, required=True)
    sample.add_argument("--n", type=_positive_int, required=True)
    sample.add_argument("--seed", type=_nonnegative_int, default=0)
    sample.add_argument("--stream", type=_nonnegative_int, default=0)
    sample.add_argument("--out", type=Path)
    sample.set_defaults(handler=cmd_sample)

    return parser


def main() -> None:
    """Main entry point for the CLI."""
    args = build_parser().parse_args()

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.oracle_cap is not None:
        set_oracle_cap(args.oracle_cap)
    if args.cover_cap is not None:
        set_cover_cap(args.cover_cap)
    if args.workers is not None:
        set_workers(args.workers)

    try:
        code = args.handler(args)
    except InfeasibleSizeError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_INFEASIBLE)
    except FileNotFoundError as e:
        print(f"Error: file not found: {e.filename}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except (DomainError, FileFormatError, DiscboundError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)

    sys.exit(code)


if __name__ == "__main__":
    main()
