import sys
from pathlib import Path

from schemas.benchmarks import SweepConfig
from services.benchmarks import BenchmarkService
from services.problems import ProblemService

SEED_MARKER = "seed_"

INSTANCE_DIR = Path("instances")


def instance_path(out_dir: Path, dim: int, kappa: float, trial: int) -> Path:
    return out_dir / f"{SEED_MARKER}dim{dim}_kappa{kappa:g}_trial{trial}.json"


def seed(out_dir: Path = INSTANCE_DIR, config: SweepConfig | None = None) -> int:
    """Write the instance population a sweep with `config` would solve (default grid)."""
    config = config or SweepConfig()
    out_dir.mkdir(parents=True, exist_ok=True)

    written = 0
    for dim in config.dims:
        for kappa in config.kappas:
            for trial in range(config.trials):
                path = instance_path(out_dir, dim, kappa, trial)
                if path.exists():
                    continue
                instance_seed = BenchmarkService.instance_seed(config.base_seed, dim, kappa, trial)
                ProblemService.save_instance(ProblemService.generate_instance(dim, kappa, instance_seed), path)
                written += 1

    print(f"Seeded {written} instances in {out_dir}.")
    return written


def clean(out_dir: Path = INSTANCE_DIR) -> int:
    removed = 0
    for path in out_dir.glob(f"{SEED_MARKER}*.json"):
        path.unlink()
        removed += 1
    print(f"Removed {removed} instances from {out_dir}.")
    return removed


if __name__ == "__main__":
    mode = sys.argv[1] if len(sys.argv) > 1 else "seed"

    if mode not in ("seed", "--clean"):
        print("Usage: python -m scripts.seed_instances [--clean]")
        sys.exit(1)

    if mode == "--clean":
        clean()
    else:
        seed()
