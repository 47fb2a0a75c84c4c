import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from schemas.arrays import RealMatrix
from utils.validators import validate_kappa, validate_power_of_two


class LinearSystemInstance(BaseModel):
    """A normalized system A x = b.

    JSON form: {"dim": N, "kappa": float, "seed": int, "A": row-major N*N floats,
    "b": N floats}. `kappa` is the target condition number the instance was built for.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    kappa: float
    seed: int
    A: RealMatrix
    b: RealMatrix

    @model_validator(mode="before")
    @classmethod
    def reshape_row_major(cls, data):
        if isinstance(data, dict) and "A" in data and "dim" in data:
            matrix = np.asarray(data["A"], dtype=float)
            if matrix.ndim == 1:
                dim = int(data["dim"])
                if matrix.size != dim * dim:
                    raise ValueError(f"A must have {dim * dim} entries, got {matrix.size}")
                data = {**data, "A": matrix.reshape(dim, dim)}
        return data

    @field_validator("dim")
    @classmethod
    def check_dim(cls, value):
        return validate_power_of_two(value)

    @field_validator("kappa")
    @classmethod
    def check_kappa(cls, value):
        return validate_kappa(value)

    @field_validator("seed")
    @classmethod
    def check_seed(cls, value):
        if not 0 <= value < 2**64:
            raise ValueError("seed must fit in 64 bits")
        return value

    @model_validator(mode="after")
    def check_invariants(self):
        n = self.dim
        if self.A.shape != (n, n):
            raise ValueError(f"A must be {n}x{n}, got {self.A.shape}")
        if self.b.shape != (n,):
            raise ValueError(f"b must have length {n}, got {self.b.shape}")

        if np.max(np.abs(self.A - self.A.T)) > 1e-12:
            raise ValueError("A must be symmetric")
        eigenvalues = np.linalg.eigvalsh(self.A)
        if eigenvalues[0] <= 0:
            raise ValueError("A must be positive definite")
        if abs(eigenvalues[-1] - 1.0) > 1e-10:
            raise ValueError(f"A must have spectral norm 1, got {eigenvalues[-1]!r}")
        measured = eigenvalues[-1] / eigenvalues[0]
        if abs(measured - self.kappa) > 1e-6:
            raise ValueError(f"condition number {measured!r} does not match kappa {self.kappa!r}")
        if abs(np.linalg.norm(self.b) - 1.0) > 1e-12:
            raise ValueError("b must have unit norm")
        return self

    @field_serializer("A", "b")
    def serialize_row_major(self, array: np.ndarray) -> list[float]:
        return array.ravel().tolist()
