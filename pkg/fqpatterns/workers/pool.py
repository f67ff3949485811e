"""
Shard dispatch for Monte Carlo jobs.

Trials are cut into contiguous ranges and run inline, in a process pool, or
on Celery workers when FQP_BROKER_URL is set. Rows are concatenated in trial
order, so results never depend on the dispatch mode or worker count.
"""
from concurrent.futures import ProcessPoolExecutor

import structlog

from fqpatterns.core.config import settings
from fqpatterns.core.errors import BadParams
from fqpatterns.models.trials import TrialJob
from fqpatterns.services.trials import execute_shard

log = structlog.get_logger(__name__)

# shards per worker; more shards even out uneven trial costs
_SHARDS_PER_WORKER = 4


def shard_bounds(trials: int, workers: int) -> list[tuple[int, int]]:
    count = max(1, min(trials, workers * _SHARDS_PER_WORKER))
    return [(i * trials // count, (i + 1) * trials // count) for i in range(count)]


def run_job(job: TrialJob, trials: int, workers: int | None = None) -> list[list]:
    if trials < 1:
        raise BadParams(f"trials = {trials} must be >= 1")
    workers = max(1, workers or settings.WORKERS)
    payload = job.model_dump(mode="json")
    shards = shard_bounds(trials, workers)

    if settings.BROKER_URL:
        from celery import group

        from fqpatterns.workers.celery_app import run_trial_shard

        log.info("dispatch_celery", shards=len(shards), trials=trials)
        result = group(run_trial_shard.s(payload, lo, hi) for lo, hi in shards).apply_async()
        parts = result.get()
    elif workers > 1 and len(shards) > 1:
        log.info("dispatch_pool", workers=workers, shards=len(shards), trials=trials)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    execute_shard,
                    [payload] * len(shards),
                    [lo for lo, _ in shards],
                    [hi for _, hi in shards],
                )
            )
    else:
        parts = [execute_shard(payload, lo, hi) for lo, hi in shards]
    return [row for part in parts for row in part]
