import pytest
import structlog

from fqpatterns.core.config import settings


@pytest.fixture(autouse=True)
def _local_settings(monkeypatch):
    # keep every test in-process and side-effect free
    monkeypatch.setattr(settings, "WORKERS", 1)
    monkeypatch.setattr(settings, "BROKER_URL", None)
    monkeypatch.setattr(settings, "METRICS_PATH", None)
    yield
    # setup_logging() binds structlog to the (capsys-replaced) stderr of the
    # current test; drop that binding so later tests don't write to a closed stream
    structlog.reset_defaults()
