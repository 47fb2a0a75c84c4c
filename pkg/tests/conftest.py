import os
os.environ["ENV"] = "testing"
os.environ["CELERY_TASK_ALWAYS_EAGER"] = "True"
os.environ["ADIALIN_THREADS"] = "1"
import logging

import numpy as np
import pytest

from schemas.hamiltonians import Schedule
from schemas.instances import LinearSystemInstance
from services.problems import ProblemService


@pytest.fixture(autouse=True)
def restore_root_handlers():
    """CLI runs call setup_logging, which replaces the root handlers."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


# Instances

@pytest.fixture
def identity_instance():
    """A = I: H0 == H1, so the null vector (b, 0) never moves."""
    return LinearSystemInstance(dim=2, kappa=1.0, seed=0, A=np.eye(2), b=np.array([0.6, 0.8]))


@pytest.fixture
def diagonal_instance():
    """A = diag(1, 0.5), b = (1, 1)/sqrt(2): solution direction (1, 2)/sqrt(5)."""
    return LinearSystemInstance(
        dim=2, kappa=2.0, seed=0,
        A=np.diag([1.0, 0.5]), b=np.array([1.0, 1.0]) / np.sqrt(2),
    )


@pytest.fixture
def small_instance():
    return ProblemService.generate_instance(2, 10.0, 7)


@pytest.fixture
def medium_instance():
    return ProblemService.generate_instance(4, 10.0, 11)


@pytest.fixture
def short_schedule():
    return Schedule(steps=40, dt=0.1)


@pytest.fixture
def instance_file(tmp_path, small_instance):
    return ProblemService.save_instance(small_instance, tmp_path / "instance.json")
