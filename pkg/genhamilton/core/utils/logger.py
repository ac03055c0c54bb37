"""Structured logging setup for genhamilton.

Pipeline milestones are logged as events: a name plus a ``details`` mapping
carried on the record. ``EventFormatter`` appends the details as key=value
pairs, and ``analysis_phase`` wraps one step of a group analysis so its
wall-clock time is logged along with what it produced.
"""

import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

# Create logger instance
logger = logging.getLogger("genhamilton")


class EventFormatter(logging.Formatter):
    """Formatter that renders the details of event records as key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        details = getattr(record, "details", None)
        if details:
            text += " | " + " ".join(f"{key}={value}" for key, value in details.items())
        return text


def setup_logging(level: str = "INFO") -> None:
    """Configure structured logging for the application.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    log_level = getattr(logging, level.upper(), logging.INFO)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(log_level)
    handler.setFormatter(
        EventFormatter(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    )

    # Drop handlers installed by earlier calls
    for existing in list(logger.handlers):
        logger.removeHandler(existing)

    logger.setLevel(log_level)
    logger.addHandler(handler)
    logger.propagate = False


def event_log(event: str, details: dict[str, Any], level: int = logging.INFO) -> None:
    """Log a pipeline milestone.

    Args:
        event: Event type (e.g., "group_built", "matrix_computed", "verdict")
        details: Event details, rendered by ``EventFormatter``
        level: Log level of the record
    """
    logger.log(level, event, extra={"event": event, "details": details})


@contextmanager
def analysis_phase(group: str, phase: str) -> Iterator[dict[str, Any]]:
    """Time one phase of a group analysis and log it as a ``phase_done`` event.

    The yielded dict ends up in the event details; callers add what the
    phase produced (class count, edge count, ...). A phase that raises is
    logged at WARNING with ``failed=True``.

    Args:
        group: Name of the group under analysis
        phase: Phase name (e.g., "classes", "degree_matrix", "cycle_search")
    """
    details: dict[str, Any] = {"group": group, "phase": phase}
    start = time.perf_counter()
    failed = False
    try:
        yield details
    except BaseException:
        failed = True
        raise
    finally:
        details["seconds"] = round(time.perf_counter() - start, 3)
        if failed:
            details["failed"] = True
        event_log("phase_done", details, logging.WARNING if failed else logging.DEBUG)
