import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models.enums import EvolutionMode
from schemas.arrays import ComplexArray


class EvolvedState(BaseModel):
    """Amplitudes over the 2N-dimensional space after `step` discrete steps.

    `norm` is the Euclidean norm of the step output before any renormalization,
    so a first-order product exposes the growth of the non-unitary step.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: ComplexArray
    step: int = Field(ge=0)
    norm: float = Field(ge=0)

    @property
    def half(self) -> int:
        return self.amplitudes.shape[0] // 2


class ReferenceTrace(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mode: EvolutionMode
    steps: int
    dt: float
    states: list[EvolvedState]

    @property
    def final_state(self) -> EvolvedState:
        return self.states[-1]

    def amplitudes(self) -> np.ndarray:
        """All states stacked as a (steps + 1, 2N) array."""
        return np.stack([state.amplitudes for state in self.states])
