import math

import numpy as np


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


def validate_power_of_two(value):
        """
        Dimension must be a positive power of two (2, 4, 8, ...), so that it
        maps onto a whole number of qubits.
        """
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise ValueError('Dimension must be an integer')

        if not is_power_of_two(int(value)):
            raise ValueError(f'Dimension must be a power of two, got {value}')

        return int(value)


def validate_kappa(value):
        """
        Condition number must be finite and at least 1.
        """
        if not math.isfinite(value):
            raise ValueError('Condition number must be finite')

        if value < 1:
            raise ValueError(f'Condition number must be >= 1, got {value}')

        return float(value)


def validate_finite(array: np.ndarray, name: str = "array") -> np.ndarray:
        if not np.all(np.isfinite(array)):
            raise ValueError(f'{name} must contain finite entries only')

        return array


def validate_unit_norm(vector: np.ndarray, tol: float = 1e-10, name: str = "vector") -> np.ndarray:
        """
        Vector must have Euclidean norm 1 within `tol`.
        """
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > tol:
            raise ValueError(f'{name} must have unit norm, got {norm!r}')

        return vector
