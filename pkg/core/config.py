import os

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    ENV: str = "development"

    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "logs"

    # 0 means one worker per CPU
    ADIALIN_THREADS: int = Field(default=0, ge=0)

    # excited modes grow by about exp(L * dt**2 / 2) over L first-order steps
    DEFAULT_DT: float = Field(default=0.02, gt=0)
    # measurement_gaussian std when no strength is given
    DEFAULT_NOISE_SIGMA: float = Field(default=5e-6, ge=0)
    DELTA_FLOOR: float = Field(default=0.01, gt=0)
    DELTA_SIGMA_FACTOR: float = Field(default=3.0, ge=0)
    TRUNCATION_FACTOR: float = Field(default=0.1, gt=0)

    CELERY_BROKER_URL: str = "memory://"
    CELERY_RESULT_BACKEND: str = "cache+memory://"
    CELERY_TASK_ALWAYS_EAGER: bool = True

    def worker_count(self) -> int:
        return self.ADIALIN_THREADS or (os.cpu_count() or 1)


settings = Settings()
