"""Structured logging setup for the command-line front end."""

import logging
import sys

import structlog


def configure_logging(verbosity: int = 0) -> None:
    """
    Route structlog events to stderr with a level filter.

    stdout stays reserved for the accuracy lines printed by the CLI.

    :param verbosity: -1 for warnings only, 0 for info, 1 or more for debug.
    """
    if verbosity < 0:
        level = logging.WARNING
    elif verbosity == 0:
        level = logging.INFO
    else:
        level = logging.DEBUG

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
