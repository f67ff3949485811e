import logging
import sys

import structlog

from fqpatterns.core.config import settings


def setup_logging(level: str | None = None) -> None:
    # Structlog JSON logs on stderr; stdout is reserved for CLI data
    name = (level or settings.LOG_LEVEL).upper()
    numeric = getattr(logging, name, logging.INFO)
    logging.basicConfig(level=numeric, stream=sys.stderr)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
