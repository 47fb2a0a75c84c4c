from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.config import settings
from models.enums import DispatchMode, EngineKind, NoiseModel, RunStatus
from schemas.simulator import NoiseConfig
from utils.validators import validate_kappa, validate_power_of_two


# Sweep config (JSON file, field names as below)
class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    dims: list[int] = Field(default_factory=lambda: [2, 4, 8, 16], min_length=1)
    kappas: list[float] = Field(default_factory=lambda: [10.0, 20.0, 30.0, 40.0, 50.0], min_length=1)
    steps_list: list[int] = Field(default_factory=lambda: list(range(200, 2001, 200)), min_length=1)
    trials: int = Field(default=10, ge=1)
    dt: float = Field(default_factory=lambda: settings.DEFAULT_DT, gt=0)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    engine: EngineKind = EngineKind.DENSE
    base_seed: int = Field(default=0, ge=0)
    output: Path = Path("results/sweep.csv")

    dispatch: DispatchMode = DispatchMode.LOCAL
    # None means settings.worker_count()
    workers: Optional[int] = Field(default=None, ge=1)
    # wall_ms stays 0 unless asked for, so reruns produce identical files
    record_wall_time: bool = False
    # None means max(DELTA_FLOOR, DELTA_SIGMA_FACTOR * sigma)
    delta: Optional[float] = Field(default=None, gt=0)

    @field_validator("dims")
    @classmethod
    def check_dims(cls, value):
        return [validate_power_of_two(dim) for dim in value]

    @field_validator("kappas")
    @classmethod
    def check_kappas(cls, value):
        return [validate_kappa(kappa) for kappa in value]

    @field_validator("steps_list")
    @classmethod
    def check_steps(cls, value):
        if any(steps < 1 for steps in value):
            raise ValueError("every step count must be >= 1")
        return value


# One trial of the sweep grid
class TrialCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int
    kappa: float
    steps: int
    trial: int
    seed: int
    instance_seed: int
    dt: float
    noise: NoiseConfig
    engine: EngineKind
    delta: Optional[float] = None
    record_wall_time: bool = False

    @property
    def key(self) -> tuple[int, float, int, int]:
        return (self.dim, self.kappa, self.steps, self.trial)


# One CSV row; field order is the column order
class BenchmarkRecord(BaseModel):
    dim: int
    kappa: float
    steps: int
    trial: int
    seed: int
    noise_model: NoiseModel
    noise_strength: float
    engine: EngineKind
    fidelity: Optional[float] = Field(default=None, ge=0, le=1)
    # against x_r (+) 0 over the full 2N state; set whenever the solve finished
    fidelity_before_truncation: Optional[float] = Field(default=None, ge=0, le=1)
    imag_residual: Optional[float] = None
    truncation_accepted: bool = False
    wall_ms: float = 0.0
    instance_seed: int
    status: RunStatus

    @property
    def key(self) -> tuple[int, float, int, int]:
        return (self.dim, self.kappa, self.steps, self.trial)


class FidelitySummary(BaseModel):
    dim: int
    kappa: float
    steps: int
    trials: int
    # trials that produced a fidelity
    scored: int
    mean: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None


class PlotArtifacts(BaseModel):
    data_files: list[Path]
    script: Path
    figures: list[Path] = []
