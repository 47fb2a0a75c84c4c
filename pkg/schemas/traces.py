from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.enums import EngineKind, RunStatus
from schemas.arrays import RealArray
from schemas.hamiltonians import Schedule
from schemas.instances import LinearSystemInstance
from schemas.simulator import NoiseConfig


class SegmentRecord(BaseModel):
    """What one dynamic-circuit segment produced.

    `vector` is the reconstructed real vector (u, v) of length 2N after sign
    prediction and renormalization.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    step: int = Field(ge=1)
    probabilities: RealArray
    signs: RealArray
    vector: RealArray
    success_probability: float = Field(ge=0, le=1 + 1e-12)
    segment_depth: int = Field(ge=1)

    @model_validator(mode="after")
    def check_record(self):
        if not np.all(np.isin(self.signs, (-1.0, 1.0))):
            raise ValueError("signs must be +1 or -1")
        if abs(np.linalg.norm(self.vector) - 1.0) > 1e-10:
            raise ValueError("reconstructed vector must have unit norm")
        if not (self.probabilities.shape == self.signs.shape == self.vector.shape):
            raise ValueError("probabilities, signs and vector must have equal length")
        return self


class SolveResult(BaseModel):
    """Final answer of a solve.

    `solution` is None when truncation was rejected; the run then needs a longer
    schedule (`suggested_steps`).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    solution: Optional[RealArray] = None
    fidelity: Optional[float] = Field(default=None, ge=0, le=1)
    fidelity_before_truncation: float = Field(ge=0, le=1)
    imag_residual: float = Field(ge=0)
    truncation_accepted: bool
    suggested_steps: Optional[int] = None

    @model_validator(mode="after")
    def check_solution(self):
        if self.truncation_accepted:
            if self.solution is None or self.fidelity is None:
                raise ValueError("an accepted truncation carries a solution and its fidelity")
            if abs(np.linalg.norm(self.solution) - 1.0) > 1e-12:
                raise ValueError("solution must have unit norm")
        return self


class EvolutionTrace(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    instance: LinearSystemInstance
    schedule: Schedule
    engine: EngineKind
    noise: NoiseConfig
    delta: float
    seed: int
    records: list[SegmentRecord]
    final_state: RealArray
    result: SolveResult
    wall_ms: float = 0.0

    @model_validator(mode="after")
    def check_trace(self):
        if len(self.records) != self.schedule.steps:
            raise ValueError(
                f"trace has {len(self.records)} records for a {self.schedule.steps}-step schedule"
            )
        return self

    @property
    def status(self) -> RunStatus:
        return RunStatus.OK if self.result.truncation_accepted else RunStatus.MODIFY_REQUIRED

    @property
    def fidelity(self) -> Optional[float]:
        return self.result.fidelity


class DepthReport(BaseModel):
    segment_depth: int
    dynamic_total: int
    conventional_total: int
    gate_count: int
    qubits: int
    steps: int
