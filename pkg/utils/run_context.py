"""
Run ID context for correlating log records.

Why?
- A sweep fans out over thousands of trials; every log line from one CLI invocation
  should be traceable back to that invocation
- The JSON formatter picks the `run_id` attribute up automatically
"""

import logging
import uuid
from contextlib import contextmanager
from typing import Iterator, Optional


@contextmanager
def run_context(run_id: Optional[str] = None) -> Iterator[str]:
    """
    Tag every log record created inside the block with a run ID.

    How it works:
    1. Use the given run ID or generate a short UUID
    2. Wrap the current LogRecord factory so each record gets `record.run_id`
    3. Restore the original factory on exit, even on error

    Usage:
        with run_context() as run_id:
            BenchmarkService.run_sweep(config)
    """
    if not run_id:
        run_id = uuid.uuid4().hex[:12]

    old_factory = logging.getLogRecordFactory()

    def record_factory(*args, **kwargs):
        record = old_factory(*args, **kwargs)
        record.run_id = run_id
        return record

    logging.setLogRecordFactory(record_factory)

    try:
        yield run_id
    finally:
        logging.setLogRecordFactory(old_factory)


def get_run_id(record: logging.LogRecord) -> str:
    """Run ID of a log record, or "no-run-id" outside a run context."""
    return getattr(record, "run_id", "no-run-id")
