"""Shared pydantic building blocks for numeric domain types."""

from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _as_vector(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {array.shape}")
    return _readonly(array)


def _as_matrix(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    if array.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {array.shape}")
    return _readonly(array)


def _as_mask(value: Any) -> np.ndarray:
    array = np.array(value, dtype=bool)
    if array.ndim != 1:
        raise ValueError(f"expected a 1-d mask, got shape {array.shape}")
    return _readonly(array)


def _to_list(array: np.ndarray) -> list:
    return array.tolist()


# Arrays are stored read-only and serialise to (nested) JSON lists, which
# round-trip every float64 exactly.
Vector = Annotated[
    np.ndarray,
    BeforeValidator(_as_vector),
    PlainSerializer(_to_list, return_type=list, when_used="json"),
]
Matrix = Annotated[
    np.ndarray,
    BeforeValidator(_as_matrix),
    PlainSerializer(_to_list, return_type=list, when_used="json"),
]
Mask = Annotated[
    np.ndarray,
    BeforeValidator(_as_mask),
    PlainSerializer(_to_list, return_type=list, when_used="json"),
]


class DomainModel(BaseModel):
    """Immutable base for fitted models and datasets"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def clamp(values, bound: float):
    """Clamp predictions to the response interval [-K, K]"""

    return np.clip(values, -bound, bound)
