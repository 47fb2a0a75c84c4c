from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.enums import ScheduleKind
from schemas.arrays import RealArray


class Schedule(BaseModel):
    """L equal slices of length dt; H_k is sampled at s_k = k / L."""
    model_config = ConfigDict(frozen=True)

    steps: int = Field(ge=1)
    dt: float = Field(gt=0)
    kind: ScheduleKind = ScheduleKind.LINEAR

    @property
    def total_time(self) -> float:
        return self.steps * self.dt

    def s_at(self, k: int) -> float:
        return k / self.steps

    def f(self, s: float) -> float:
        # linear schedule only
        return s


class HamiltonianPair(BaseModel):
    """H0 and H1 for an N-dimensional system, both 2N x 2N.

    `A` and `b` are kept so that callers can recover the blocks and the initial state
    without re-reading the instance.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int = Field(ge=1)
    H0: RealArray
    H1: RealArray
    A: RealArray
    b: RealArray

    @model_validator(mode="after")
    def check_shapes(self):
        size = 2 * self.N
        for name in ("H0", "H1"):
            matrix = getattr(self, name)
            if matrix.shape != (size, size):
                raise ValueError(f"{name} must be {size}x{size}, got {matrix.shape}")
            if np.max(np.abs(matrix - matrix.T)) > 1e-12:
                raise ValueError(f"{name} must be Hermitian")
        return self

    @property
    def initial_state(self) -> np.ndarray:
        """|0, b>: b in the first block, zeros in the second."""
        return np.concatenate([self.b, np.zeros(self.N)])


class GapPoint(BaseModel):
    s: float
    gap: float
    criterion: Optional[float] = None
    # set when the gap falls below 1e-12; criterion is then left empty
    flagged: bool = False
