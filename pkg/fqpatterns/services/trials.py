"""
Execution of one shard of Monte Carlo trials.

A shard is a contiguous range of trial indices of a TrialJob. Everything is a
function of JSON-able arguments, so a shard gives the same rows whether it
runs inline, in a process pool or on a Celery worker.

Small families are enumerated once per shard and each trial is a single
vectorised membership test; larger ones go through the anchored search of
the sampled set. Both give the same rows.

Row layout:
- bernoulli / uniform jobs: [X, Y, |E|] per trial (Y is None unless with_y)
- coupled jobs: [X(delta_1), ..., X(delta_k)] per trial
- coupled_uniform jobs: [X(M_1), ..., X(M_k)] per trial
"""
import time

import numpy as np
import structlog

from fqpatterns.core.config import settings
from fqpatterns.core.metrics import PATTERNS_COUNTED, SHARD_LATENCY, TRIALS_RUN
from fqpatterns.models.trials import TrialJob
from fqpatterns.services.census import family_size
from fqpatterns.services.patterns import (
    PatternFamily,
    PatternKind,
    contained_patterns,
    intersection_profile,
    make_family,
    pattern_array,
)
from fqpatterns.services.sampler import (
    SampleSet,
    point_ranks,
    point_uniforms,
    sample_uniform_m,
)

log = structlog.get_logger(__name__)

# families up to this many members are held in memory for the whole shard
DENSE_ROWS = 100_000


def _dense_rows(family: PatternFamily) -> np.ndarray | None:
    if family.kind is not PatternKind.PLANE and family.num_points > settings.ENUM_CAP:
        return None
    if family_size(family) > DENSE_ROWS:
        return None
    return pattern_array(family)


def _draw(family: PatternFamily, job: TrialJob, trial: int) -> np.ndarray:
    if job.model == "uniform":
        return sample_uniform_m(family.ctx, family.n, job.M, job.seed, trial).bits
    return point_uniforms(family.ctx, family.n, job.seed, trial) < job.delta


def _single(family: PatternFamily, job: TrialJob, trial: int, members: np.ndarray | None) -> list:
    bits = _draw(family, job, trial)
    if members is None:
        rows = contained_patterns(family, SampleSet(family.ctx, family.n, bits))
    else:
        rows = members[bits[members].all(axis=1)]
    y = None
    if job.with_y:
        y = int(intersection_profile(rows, family.num_points, family.a)[1 : family.a].sum())
    return [len(rows), y, int(bits.sum())]


def _coupled(family: PatternFamily, job: TrialJob, trial: int, members: np.ndarray | None) -> list:
    # a pattern lies in E(c) iff the largest key among its points is below c;
    # keys are per-point uniforms, or shuffle positions under the uniform-M model
    if job.model == "coupled_uniform":
        cuts = job.Ms
        keys = point_ranks(family.ctx, family.n, cuts[-1], job.seed, trial)
    else:
        cuts = job.deltas
        keys = point_uniforms(family.ctx, family.n, job.seed, trial)
    if members is None:
        rows = contained_patterns(family, SampleSet(family.ctx, family.n, keys < cuts[-1]))
    else:
        rows = members
    if not len(rows):
        return [0] * len(cuts)
    latest = keys[rows].max(axis=1)
    return [int((latest < c).sum()) for c in cuts]


def execute_shard(job: dict | TrialJob, start: int, stop: int) -> list[list]:
    """Run trials [start, stop) of `job` and return one row per trial, in trial order."""
    job = TrialJob.model_validate(job)
    family = make_family(job.kind, job.q, job.n, job.m)
    coupled = job.model in ("coupled", "coupled_uniform")
    run = _coupled if coupled else _single
    t0 = time.perf_counter()
    members = _dense_rows(family) if stop > start else None
    rows = [run(family, job, trial, members) for trial in range(start, stop)]
    elapsed = time.perf_counter() - t0

    found = sum(r[-1] if coupled else r[0] for r in rows)
    TRIALS_RUN.labels(job.kind).inc(stop - start)
    PATTERNS_COUNTED.labels(job.kind).inc(found)
    SHARD_LATENCY.labels(job.kind).observe(elapsed)
    log.debug(
        "shard_done",
        family=family.label,
        model=job.model,
        dense=members is not None,
        start=start,
        stop=stop,
        seconds=round(elapsed, 3),
    )
    return rows
