import logging
import os
import sys

import structlog

_configured = False


def setup_logging(level: str | None = None):
    """Configure structlog once; logs go to stderr so stdout stays a clean report stream."""
    global _configured
    if _configured and level is None:
        return
    level_name = (level or os.getenv("LOG_LEVEL", "WARNING")).upper()
    log_level = getattr(logging, level_name, logging.WARNING)

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(key_order=["level", "logger_name", "event"]),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str):
    """Get a structlog logger bound to the module name"""
    setup_logging()
    # wrap_logger reserves the "logger" keyword
    return structlog.get_logger(logger_name=name)
