"""
Command-line driver.

    python -m fqpatterns census   --family 3ap --q 3 --n 2
    python -m fqpatterns sweep    --family plane --q 2 --n 6 --m 1 --scales 1/8,8
    python -m fqpatterns sweep    --family pg --q 3 --n 3 --model uniform
    python -m fqpatterns poisson  --family 3ap --q 5 --n 3 --lambda 1
    python -m fqpatterns extremal --family 3ap --qn 3,2 --qn 3,3 --qn 3,4
    python -m fqpatterns sample   --q 3 --n 2 --model uniform --M 5
    python -m fqpatterns exactprob --q 2 --n 2 --M 2 --f 1

Exit codes: 0 ok, 2 invalid input, 3 resource cap exceeded, 4 internal invariant breach.
"""
from __future__ import annotations

import argparse
from fractions import Fraction
from typing import Any, Callable, Sequence

import structlog
from pydantic import ValidationError

from fqpatterns.core.config import settings
from fqpatterns.core.errors import BadParams, PatternError, ValidationFailure
from fqpatterns.core.metrics import write_metrics
from fqpatterns.core.observability import setup_logging
from fqpatterns.families.registry import DESCRIPTIONS, build_family, list_families
from fqpatterns.models.extremal import EXTREMAL_COLUMNS, FreeSetResult
from fqpatterns.models.run import RunConfig
from fqpatterns.models.stats import SWEEP_COLUMNS
from fqpatterns.services.census import condition_report, er_containment_prob, family_size, threshold
from fqpatterns.services.extremal import best_free_set, extremal_table
from fqpatterns.services.field import make_field
from fqpatterns.services.reports import Table, open_output, write_csv, write_json, write_lines
from fqpatterns.services.sampler import sample_bernoulli, sample_uniform_m
from fqpatterns.services.stats import DEFAULT_SCALES, distribution_X, poisson_fit, summary_row, threshold_sweep

log = structlog.get_logger(__name__)

CAP_SETTINGS = ("ENUM_CAP", "PLANE_CAP", "CENSUS_CAP", "SPACE_CAP")
CENSUS_COLUMNS = ["family", "q", "n", "m", "k", "I_k"]
FREE_COLUMNS = [c for c in FreeSetResult.model_fields]


# ---------- Argument parsing ----------


def _scales(text: str) -> list[float]:
    try:
        return [float(Fraction(part.strip())) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers such as 1/8,1,8; got {text!r}")


def _qn(text: str) -> tuple[int, int]:
    try:
        q, n = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected q,n such as 3,4; got {text!r}")
    return q, n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqpatterns",
        description="Random subsets of GF(q)^n: pattern censuses, thresholds, Poisson limits, free sets.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field order (a prime power)")
    common.add_argument("--n", type=int, help="dimension")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=None, help="trial workers (default: FQP_WORKERS or all cores)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument(
        "--family",
        choices=list_families(),
        help="; ".join(f"{k}: {v}" for k, v in DESCRIPTIONS.items()),
    )
    family.add_argument("--m", type=int, default=None, help="plane dimension")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common, family], help="exact |A|, I_k and moment conditions")
    p.add_argument("--delta", type=float, default=None, help="density for E(X), E(Y) (default: threshold)")

    p = sub.add_parser("sweep", parents=[common, family], help="coupled threshold sweep")
    p.add_argument("--scales", type=_scales, default=None, help="multipliers of t(n,q), e.g. 1/8,1/4,1,8")
    p.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
    p.add_argument("--model", choices=["bernoulli", "uniform"], default="bernoulli", help="uniform: M = round(q^n * delta) points")

    p = sub.add_parser("poisson", parents=[common, family], help="law of X against Po(lambda)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
    p.add_argument("--model", choices=["bernoulli", "uniform"], default="bernoulli")

    p = sub.add_parser("extremal", parents=[common, family], help="deletion-method free sets")
    p.add_argument("--qn", type=_qn, action="append", default=None, help="table row q,n (repeatable)")
    p.add_argument("--seeds", type=int, default=None, help="seed budget per construction")

    p = sub.add_parser("sample", parents=[common], help="hex dump of sampled bitsets")
    p.add_argument("--model", choices=["bernoulli", "uniform"], default="bernoulli")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--trials", type=int, default=1)

    p = sub.add_parser("exactprob", parents=[common], help="exact P(F inside E) for a uniform M-subset")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    return parser


# ---------- Commands ----------


def _family(config: RunConfig):
    return build_family(config.family, config.q, config.n, config.m)


def cmd_census(config: RunConfig, workers: int) -> Any:
    family = _family(config)
    delta = config.delta if config.delta is not None else min(1.0, threshold(family))
    report = condition_report(family, delta)
    if config.format == "json":
        return report
    return Table(CENSUS_COLUMNS, [{**family.describe(), "k": k, "I_k": v} for k, v in report.I.items()])


def cmd_sweep(config: RunConfig, workers: int) -> Any:
    family = _family(config)
    rows = threshold_sweep(
        family, config.scales or DEFAULT_SCALES, config.trials, config.seed, model=config.model, workers=workers
    )
    return rows if config.format == "json" else Table(SWEEP_COLUMNS, rows)


def cmd_poisson(config: RunConfig, workers: int) -> Any:
    family = _family(config)
    lam = config.lam or 1.0
    size = family_size(family)
    delta = (lam / size) ** (1 / family.a)
    if delta > 1:
        raise BadParams(f"lambda = {lam} exceeds |A| = {size}")
    M = None
    if config.model == "uniform":
        M = round(family.num_points * delta)
        hist = distribution_X(family, None, config.trials, config.seed, model="uniform", M=M, workers=workers)
    else:
        hist = distribution_X(family, delta, config.trials, config.seed, workers=workers)
    fit = poisson_fit(hist, lam)
    if config.format == "json":
        return {"delta": delta, "M": M, "histogram": hist, "fit": fit}
    return Table(SWEEP_COLUMNS, [summary_row(family, delta / threshold(family), delta, hist, config.seed, size, M=M)])


def cmd_extremal(config: RunConfig, workers: int) -> Any:
    if config.qn:
        rows = extremal_table(config.family, config.qn, config.m, config.seeds)
        return rows if config.format == "json" else Table(EXTREMAL_COLUMNS, rows)
    family = _family(config)
    result = best_free_set(family, range(config.seed, config.seed + (config.seeds or 1)))
    if config.format == "json":
        return result
    row = result.model_dump()
    row["points"] = " ".join(str(p) for p in result.points)
    return Table(FREE_COLUMNS, [row])


def cmd_sample(config: RunConfig, workers: int) -> Any:
    ctx = make_field(config.q)
    samples = []
    for trial in range(config.trials):
        if config.model == "uniform":
            samples.append(sample_uniform_m(ctx, config.n, config.M, config.seed, trial))
        else:
            samples.append(sample_bernoulli(ctx, config.n, config.delta, config.seed, trial))
    if config.format == "json":
        return [{"trial": s.trial, "size": s.size, "bits": s.to_hex()} for s in samples]
    return [s.to_hex() for s in samples]


def cmd_exactprob(config: RunConfig, workers: int) -> Any:
    prob = er_containment_prob(config.q, config.n, config.M, config.f)
    if config.format == "json":
        return {"numerator": prob.numerator, "denominator": prob.denominator, "value": str(prob)}
    return [str(prob)]


COMMANDS: dict[str, Callable[[RunConfig, int], Any]] = {
    "census": cmd_census,
    "sweep": cmd_sweep,
    "poisson": cmd_poisson,
    "extremal": cmd_extremal,
    "sample": cmd_sample,
    "exactprob": cmd_exactprob,
}


def _emit(result: Any, config: RunConfig, out) -> None:
    if isinstance(result, Table):
        write_csv(result, config, out)
    elif config.format == "csv" and isinstance(result, list) and all(isinstance(r, str) for r in result):
        write_lines(result, config, out)
    else:
        write_json(result, config, out)


def current_caps() -> dict[str, int]:
    return {name: int(getattr(settings, name)) for name in CAP_SETTINGS}


def main(argv: Sequence[str] | None = None) -> int:
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    workers = args.workers or settings.WORKERS
    params = {k: v for k, v in vars(args).items() if v is not None and k != "workers"}
    try:
        config = RunConfig(caps=current_caps(), **params)
        log.info("run_start", env=settings.ENV, command=config.command, family=config.family, q=config.q, n=config.n, seed=config.seed)
        result = COMMANDS[config.command](config, workers)
        with open_output(config.out) as out:
            _emit(result, config, out)
    except ValidationError as exc:
        log.error("invalid_config", errors=[e["msg"] for e in exc.errors()])
        return ValidationFailure.exit_code
    except PatternError as exc:
        log.error("run_failed", error=type(exc).__name__, detail=str(exc))
        return exc.exit_code
    finally:
        if settings.METRICS_PATH:
            write_metrics(settings.METRICS_PATH)
    return 0
