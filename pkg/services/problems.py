from pathlib import Path

import numpy as np
from pydantic import ValidationError

from core.errors import InvalidInputError
from core.logging_config import get_logger
from schemas.instances import LinearSystemInstance
from utils.linalg import as_square_matrix, condition_number, spectral_norm
from utils.validators import is_power_of_two

logger = get_logger(__name__)


class ProblemService:
    @staticmethod
    def generate_instance(dim: int, kappa: float, seed: int) -> LinearSystemInstance:
        """Random SPD system with spectral norm 1 and condition number exactly `kappa`.

        Eigenvalues are log-spaced on [1/kappa, 1] with both ends pinned; the eigenbasis
        is a Haar-like orthogonal matrix from QR of a Gaussian draw.
        """
        if not isinstance(dim, (int, np.integer)) or dim < 2 or not is_power_of_two(int(dim)):
            raise InvalidInputError("dim must be a power of two >= 2", dim=dim)
        if not np.isfinite(kappa) or kappa < 1:
            raise InvalidInputError("kappa must be >= 1", kappa=kappa)
        if not 0 <= seed < 2**64:
            raise InvalidInputError("seed must fit in 64 bits", seed=seed)

        dim = int(dim)
        rng = np.random.default_rng(seed)
        gaussian = rng.standard_normal((dim, dim))
        Q, R = np.linalg.qr(gaussian)
        Q = Q * np.where(np.diag(R) < 0, -1.0, 1.0)

        eigenvalues = np.geomspace(1.0 / kappa, 1.0, dim)
        eigenvalues[0] = 1.0 / kappa
        eigenvalues[-1] = 1.0

        A = (Q * eigenvalues) @ Q.T
        A = (A + A.T) / 2
        b = rng.standard_normal(dim)
        b /= np.linalg.norm(b)

        instance = LinearSystemInstance(dim=dim, kappa=float(kappa), seed=int(seed), A=A, b=b)
        logger.debug("Instance generated", extra={"dim": dim, "kappa": kappa, "seed": seed})
        return instance

    @staticmethod
    def normalize_system(A_raw, b_raw, seed: int = 0) -> LinearSystemInstance:
        """Scale A to spectral norm 1 and b to unit norm. The solution direction is unchanged."""
        A_raw = as_square_matrix(np.asarray(A_raw, dtype=float), "A")
        b_raw = np.asarray(b_raw, dtype=float)
        dim = A_raw.shape[0]

        if b_raw.shape != (dim,):
            raise InvalidInputError("b must match the dimension of A", dim=dim, length=b_raw.size)
        if not is_power_of_two(dim):
            raise InvalidInputError("dim must be a power of two; pad the system first", dim=dim)
        if np.max(np.abs(A_raw - A_raw.T)) > 1e-12:
            raise InvalidInputError("A must be symmetric")
        b_norm = float(np.linalg.norm(b_raw))
        if b_norm == 0.0:
            raise InvalidInputError("b must be nonzero")
        if np.linalg.eigvalsh(A_raw)[0] <= 0:
            raise InvalidInputError("A must be positive definite")

        A = A_raw / spectral_norm(A_raw)
        A = (A + A.T) / 2
        kappa = condition_number(A)
        return LinearSystemInstance(dim=dim, kappa=kappa, seed=seed, A=A, b=b_raw / b_norm)

    @staticmethod
    def hermitian_dilation(A) -> np.ndarray:
        """[[0, A], [A^dagger, 0]]."""
        A = np.asarray(A)
        if A.ndim != 2:
            raise InvalidInputError("A must be a matrix", shape=list(A.shape))
        rows, cols = A.shape
        dtype = np.result_type(A.dtype, float)
        dilated = np.zeros((rows + cols, rows + cols), dtype=dtype)
        dilated[:rows, rows:] = A
        dilated[rows:, :rows] = A.conj().T
        return dilated

    @staticmethod
    def pad_to_power_of_two(A, b) -> tuple[np.ndarray, np.ndarray]:
        """Zero-pad a k x k system to the next power of two.

        The padded matrix is singular whenever padding happens, so padded systems can
        be block-encoded but not solved by the adiabatic path.
        """
        A = as_square_matrix(A, "A")
        b = np.asarray(b)
        size = A.shape[0]
        if b.shape != (size,):
            raise InvalidInputError("b must match the dimension of A", dim=size, length=b.size)

        target = 1
        while target < size:
            target *= 2
        if target == size:
            return A.copy(), b.copy()

        padded_A = np.zeros((target, target), dtype=A.dtype)
        padded_A[:size, :size] = A
        padded_b = np.zeros(target, dtype=b.dtype)
        padded_b[:size] = b
        return padded_A, padded_b

    @staticmethod
    def save_instance(instance: LinearSystemInstance, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(instance.model_dump_json())
        return path

    @staticmethod
    def load_instance(path: Path) -> LinearSystemInstance:
        path = Path(path)
        if not path.is_file():
            raise InvalidInputError("instance file not found", path=str(path))
        try:
            return LinearSystemInstance.model_validate_json(path.read_text())
        except ValidationError as exc:
            first = exc.errors()[0]
            raise InvalidInputError(
                "invalid instance file",
                path=str(path),
                reason=first["msg"],
            ) from exc

