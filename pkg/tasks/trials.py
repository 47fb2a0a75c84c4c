from celery import shared_task

from services.benchmarks import execute_trial
from utils.logger import get_logger

logger = get_logger(__name__)


@shared_task(name="tasks.trials.run_trial")
def run_trial_task(cell: dict) -> dict:
    """Run one sweep cell; takes and returns JSON-ready dicts so any broker can carry them."""
    logger.debug("Trial task received", extra={"dim": cell.get("dim"), "trial": cell.get("trial")})
    return execute_trial(cell)
