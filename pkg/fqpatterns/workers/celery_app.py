from celery import Celery

import structlog

from fqpatterns.core.config import settings
from fqpatterns.services.trials import execute_shard

log = structlog.get_logger(__name__)

celery = Celery("fqpatterns")
celery.conf.broker_url = settings.BROKER_URL or "memory://"
celery.conf.result_backend = settings.BROKER_URL or "cache+memory://"
celery.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_acks_late=True,            # shards are pure, so redelivery is safe
    worker_prefetch_multiplier=1,   # fair dispatch
    task_time_limit=60 * 60,        # hard limit: 60 min
    task_soft_time_limit=60 * 58,   # soft limit: 58 min
)

# ---------------------------------------------------------------------------
# run_trial_shard
# ---------------------------------------------------------------------------


@celery.task(name="run_trial_shard")
def run_trial_shard(job: dict, start: int, stop: int) -> list[list]:
    """
    Celery entrypoint: run trials [start, stop) of a TrialJob payload and
    return the per-trial rows.
    """
    log.info("shard_received", kind=job.get("kind"), start=start, stop=stop)
    return execute_shard(job, start, stop)
