"""
Monte Carlo estimates on top of the trial runner: P(X >= 1), the law of X,
Poisson goodness of fit and coupled threshold sweeps.
"""
from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np
import structlog
from scipy.stats import poisson

from fqpatterns.core.errors import BadParams
from fqpatterns.models.stats import Histogram, MomentEstimate, PoissonFit, SweepRow
from fqpatterns.models.trials import TrialJob, TrialSummary
from fqpatterns.services.census import expected_X_uniform, family_size, markov_bound, threshold
from fqpatterns.services.patterns import PatternFamily
from fqpatterns.services.sampler import Model
from fqpatterns.workers.pool import run_job

log = structlog.get_logger(__name__)

R_MAX = 4
DEFAULT_SCALES = (1 / 8, 1 / 4, 1 / 2, 1, 2, 4, 8)


def _job(family: PatternFamily, seed: int, **params) -> TrialJob:
    return TrialJob(kind=family.kind.value, q=family.q, n=family.n, m=family.m, seed=seed, **params)


def run_trials(
    family: PatternFamily,
    delta: float | None,
    trials: int,
    seed: int,
    *,
    model: Model | str = Model.BERNOULLI,
    M: int | None = None,
    with_y: bool = False,
    workers: int | None = None,
) -> list[TrialSummary]:
    model = Model(model)
    if model is Model.UNIFORM:
        job = _job(family, seed, model="uniform", M=M, with_y=with_y)
    elif model is Model.BERNOULLI:
        job = _job(family, seed, model="bernoulli", delta=delta, with_y=with_y)
    else:
        raise BadParams(f"cannot run trials under the {model.value} model")
    rows = run_job(job, trials, workers)
    return [TrialSummary(trial=i, X=x, Y=y, size=size) for i, (x, y, size) in enumerate(rows)]


def _binomial_stderr(p: float, trials: int) -> float:
    return math.sqrt(p * (1 - p) / trials)


def estimate_p_contains(
    family: PatternFamily, delta: float, trials: int, seed: int, *, workers: int | None = None
) -> tuple[float, float]:
    """Fraction of trials with X >= 1, with its binomial standard error."""
    hist = distribution_X(family, delta, trials, seed, workers=workers)
    p = hist.hit_rate()
    return p, _binomial_stderr(p, trials)


def distribution_X(
    family: PatternFamily,
    delta: float | None,
    trials: int,
    seed: int,
    *,
    model: Model | str = Model.BERNOULLI,
    M: int | None = None,
    workers: int | None = None,
) -> Histogram:
    summaries = run_trials(family, delta, trials, seed, model=model, M=M, workers=workers)
    return Histogram.from_values(s.X for s in summaries)


def empirical_EY(
    family: PatternFamily, delta: float, trials: int, seed: int, *, workers: int | None = None
) -> tuple[float, float]:
    """Mean of Y per trial and its standard error."""
    summaries = run_trials(family, delta, trials, seed, with_y=True, workers=workers)
    ys = np.array([s.Y for s in summaries], dtype=float)
    stderr = float(ys.std(ddof=1) / math.sqrt(len(ys))) if len(ys) > 1 else 0.0
    return float(ys.mean()), stderr


def tv_distance(p: Mapping[int, float], r: Mapping[int, float]) -> float:
    """Half the L1 distance between two pmfs given as value -> mass maps."""
    keys = set(p) | set(r)
    return 0.5 * sum(abs(p.get(k, 0.0) - r.get(k, 0.0)) for k in keys)


def poisson_fit(hist: Histogram, lam: float, r_max: int = R_MAX) -> PoissonFit:
    if hist.trials < 1:
        raise BadParams("poisson_fit needs a nonempty histogram")
    if lam <= 0:
        raise BadParams(f"lambda = {lam} must be positive")
    if r_max < 1:
        raise BadParams(f"r_max = {r_max} must be >= 1")

    top = max(hist.counts)
    target = dict(enumerate(poisson.pmf(np.arange(top + 1), lam).tolist()))
    # Poisson mass above the largest observed value is all unmatched
    tv = tv_distance(hist.pmf(), target) + 0.5 * float(poisson.sf(top, lam))
    tv = min(1.0, max(0.0, tv))

    moments = []
    for r in range(1, r_max + 1):
        est, se = hist.factorial_moment(r)
        moments.append(MomentEstimate(r=r, estimate=est, stderr=se, target=lam ** r))
    return PoissonFit(lam=lam, tv_distance=tv, trials=hist.trials, moments=moments)


def threshold_sweep(
    family: PatternFamily,
    scales: Sequence[float],
    trials: int,
    seed: int,
    *,
    model: Model | str = Model.BERNOULLI,
    workers: int | None = None,
) -> list[SweepRow]:
    """
    p(X >= 1) at delta_s = clamp(s * t, 0, 1) for every scale s. All scales
    share the same coupled draws, so the p_hat column is exactly monotone.

    Under the uniform model scale s draws M_s = round(q^n * delta_s) points,
    the M_s-subsets being prefixes of one shuffle per trial.
    """
    if not scales or any(s <= 0 for s in scales):
        raise BadParams("scales must be a nonempty list of positive multipliers")
    model = Model(model)
    if model is Model.EXPLICIT:
        raise BadParams("cannot sweep under the explicit model")
    scales = sorted(float(s) for s in scales)
    t = threshold(family)
    deltas = [min(1.0, max(0.0, s * t)) for s in scales]
    size = family_size(family)
    log.info("sweep_start", family=family.label, model=model.value, t=t, scales=scales, trials=trials, seed=seed)

    if model is Model.UNIFORM:
        Ms = [round(family.num_points * d) for d in deltas]
        per_trial = run_job(_job(family, seed, model="coupled_uniform", Ms=Ms), trials, workers)
        return [
            summary_row(
                family, s, M / family.num_points, Histogram.from_values(row[i] for row in per_trial), seed, size, M=M
            )
            for i, (s, M) in enumerate(zip(scales, Ms))
        ]

    per_trial = run_job(_job(family, seed, model="coupled", deltas=deltas), trials, workers)
    return [
        summary_row(family, s, d, Histogram.from_values(row[i] for row in per_trial), seed, size)
        for i, (s, d) in enumerate(zip(scales, deltas))
    ]


def summary_row(
    family: PatternFamily,
    scale: float,
    delta: float,
    hist: Histogram,
    seed: int,
    size: int | None = None,
    *,
    M: int | None = None,
) -> SweepRow:
    """
    One output row: hit rate, E(X) overlay, Poisson TV distance and factorial
    moments. With M set the row describes uniform M-subsets and E(X) is exact.
    """
    size = family_size(family) if size is None else size
    p = hist.hit_rate()
    ex = float(expected_X_uniform(family, M)) if M is not None else float(size * delta ** family.a)
    fit = poisson_fit(hist, ex) if ex > 0 else None
    moments = [hist.factorial_moment(r)[0] for r in range(1, R_MAX + 1)]
    return SweepRow(
        family=family.kind.value,
        q=family.q,
        n=family.n,
        m=family.m,
        scale=scale,
        delta=delta,
        trials=hist.trials,
        seed=seed,
        p_hat=p,
        stderr=_binomial_stderr(p, hist.trials),
        E_X=ex,
        mean_X=hist.mean(),
        markov=min(1.0, ex) if M is not None else markov_bound(family, delta),
        M=M,
        tv=fit.tv_distance if fit else None,
        r1=moments[0],
        r2=moments[1],
        r3=moments[2],
        r4=moments[3],
    )
