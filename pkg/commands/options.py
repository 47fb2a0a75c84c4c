"""Options shared by several commands."""
from pathlib import Path
from typing import Optional

import click

from core.config import settings
from core.errors import InvalidInputError
from models.enums import EngineKind, NoiseModel
from schemas.instances import LinearSystemInstance
from schemas.simulator import NoiseConfig
from services.problems import ProblemService


def seed_option(default: Optional[int] = 0):
    return click.option("--seed", type=int, default=default, show_default=True, help="Random seed.")


def dt_option(f):
    return click.option(
        "--dt", type=float, default=None,
        help=f"Time per adiabatic step (default {settings.DEFAULT_DT}).",
    )(f)


def noise_options(f):
    f = click.option("--shots", type=int, default=None, help="Finite measurement shots (default: exact).")(f)
    f = click.option("--noise-strength", type=float, default=None, help="Gaussian std or depolarizing p.")(f)
    f = click.option(
        "--noise-model",
        type=click.Choice([model.value for model in NoiseModel]),
        default=None,
        help="Noise applied at each mid-circuit measurement.",
    )(f)
    return f


def engine_option(f):
    return click.option(
        "--engine",
        type=click.Choice([kind.value for kind in EngineKind]),
        default=None,
        help="circuit simulates every gate; dense multiplies R_k directly.",
    )(f)


def out_option(help_text: str):
    return click.option("--out", type=click.Path(path_type=Path), default=None, help=help_text)


def instance_options(f):
    f = click.option("--kappa", type=float, default=10.0, show_default=True, help="Target condition number.")(f)
    f = click.option("--dim", type=int, default=2, show_default=True, help="System dimension (power of two).")(f)
    f = click.option(
        "--instance", "instance_path", type=click.Path(path_type=Path), default=None,
        help="JSON instance file; overrides --dim/--kappa.",
    )(f)
    return f


def build_noise(noise_model: Optional[str], noise_strength: Optional[float], shots: Optional[int]) -> NoiseConfig:
    model = NoiseModel(noise_model) if noise_model else NoiseModel.NONE
    if model == NoiseModel.NONE and noise_strength:
        raise InvalidInputError("--noise-strength needs --noise-model")
    if noise_strength is None and model == NoiseModel.MEASUREMENT_GAUSSIAN:
        noise_strength = settings.DEFAULT_NOISE_SIGMA
    return NoiseConfig(model=model, strength=noise_strength or 0.0, shots=shots)


def load_or_generate(instance_path: Optional[Path], dim: int, kappa: float, seed: int) -> LinearSystemInstance:
    if instance_path is not None:
        return ProblemService.load_instance(instance_path)
    return ProblemService.generate_instance(dim, kappa, seed)
