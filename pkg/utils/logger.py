"""
Logging utility functions and helpers.
"""

import logging
from typing import Any, Dict, Optional

from models.enums import RunStatus


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a module.

    Args:
        name: Module name (usually __name__)

    Returns:
        Configured logger

    Usage:
        from utils.logger import get_logger
        logger = get_logger(__name__)
    """
    return logging.getLogger(name)


def log_trial(
    logger: logging.Logger,
    dim: int,
    kappa: float,
    steps: int,
    trial: int,
    status: RunStatus,
    fidelity: float,
    duration_ms: float,
    extra: Optional[Dict[str, Any]] = None
):
    """
    Log one benchmark trial in a structured format.

    The level follows the trial status: INFO for a clean run, WARNING when the
    truncation step asked for a longer schedule, ERROR when the trial failed.

    Usage:
        log_trial(logger, 4, 10.0, 2000, 3, RunStatus.OK, 0.97, 812.4)
    """
    log_data = {
        "dim": dim,
        "kappa": kappa,
        "steps": steps,
        "trial": trial,
        "status": status.value,
        "fidelity": round(fidelity, 6),
        "duration_ms": round(duration_ms, 2),
    }

    if extra:
        log_data.update(extra)

    message = f"trial dim={dim} kappa={kappa:g} steps={steps} #{trial} - {status.value}"
    if status in (RunStatus.FAILED, RunStatus.POSTSELECTION_FAILED):
        logger.error(message, extra=log_data)
    elif status == RunStatus.MODIFY_REQUIRED:
        logger.warning(message, extra=log_data)
    else:
        logger.info(message, extra=log_data)


def log_stage(
    logger: logging.Logger,
    stage: str,
    duration_ms: float,
    items: Optional[int] = None
):
    """
    Log a timed pipeline stage (sweep dispatch, CSV write, plot emission).

    Stages slower than a minute are logged as warnings so long sweeps stand out.

    Usage:
        log_stage(logger, "dispatch", 53210.0, items=2000)
    """
    log_data = {
        "stage": stage,
        "duration_ms": round(duration_ms, 2)
    }

    if items is not None:
        log_data["items"] = items

    if duration_ms > 60_000:
        logger.warning(f"Slow stage {stage}", extra=log_data)
    else:
        logger.debug(f"Stage {stage}", extra=log_data)
