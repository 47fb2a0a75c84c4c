from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.enums import NoiseModel
from schemas.arrays import ComplexArray


class StateVector(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: ComplexArray
    num_qubits: int = Field(ge=0)

    @model_validator(mode="after")
    def check_length(self):
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError(
                f"{self.num_qubits} qubits need {2**self.num_qubits} amplitudes, got {self.amplitudes.shape}"
            )
        return self

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


class NoiseConfig(BaseModel):
    """Noise applied around each mid-circuit measurement.

    `strength` is the Gaussian std for measurement_gaussian and the per-measurement
    Pauli probability for depolarizing. `shots=None` means exact probabilities.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: NoiseModel = NoiseModel.NONE
    strength: float = Field(default=0.0, ge=0)
    shots: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_strength(self):
        if self.model == NoiseModel.DEPOLARIZING and self.strength > 1:
            raise ValueError("depolarizing probability must be <= 1")
        return self

    @property
    def sigma(self) -> float:
        """Measurement-noise std; zero for every other model."""
        return self.strength if self.model == NoiseModel.MEASUREMENT_GAUSSIAN else 0.0
