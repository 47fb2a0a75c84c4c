"""
Annotated numpy array types for pydantic models.

Arrays are copied on validation so a model never aliases a caller's buffer, and are
serialized to plain (nested) lists.
"""
from typing import Annotated

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def _real_array(value) -> np.ndarray:
    array = np.array(value, dtype=float)
    if not np.all(np.isfinite(array)):
        raise ValueError("array must contain finite entries only")
    return array


def _complex_array(value) -> np.ndarray:
    array = np.array(value, dtype=complex)
    if not np.all(np.isfinite(array)):
        raise ValueError("array must contain finite entries only")
    return array


def _complex_to_pairs(array: np.ndarray) -> list:
    return np.stack([array.real, array.imag], axis=-1).tolist()


RealArray = Annotated[
    np.ndarray,
    BeforeValidator(_real_array),
    PlainSerializer(lambda array: array.tolist(), return_type=list),
]

ComplexArray = Annotated[
    np.ndarray,
    BeforeValidator(_complex_array),
    PlainSerializer(_complex_to_pairs, return_type=list),
]

# Validation only; models using it declare their own field serializer.
RealMatrix = Annotated[np.ndarray, BeforeValidator(_real_array)]
