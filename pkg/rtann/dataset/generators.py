"""Synthetic regression problems with a known regression function.

Inputs are uniform on the unit cube; columns are named ``x1 .. xp``.
"""

from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict


class Generator(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    p: int
    bound: float
    function: Callable[[np.ndarray], np.ndarray]
    plateaus: tuple[float, ...] | None = None

    @property
    def feature_names(self) -> list[str]:
        return [f"x{j + 1}" for j in range(self.p)]

    def draw_inputs(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 1.0, size=(n, self.p))


def axis_steps(x: np.ndarray) -> np.ndarray:
    return np.where(x[:, 0] < 0.5, 0.0, 10.0)


def friedman_like(x: np.ndarray) -> np.ndarray:
    return (
        10.0 * np.sin(np.pi * x[:, 0] * x[:, 1])
        + 20.0 * (x[:, 2] - 0.5) ** 2
        + 10.0 * x[:, 3]
        + 5.0 * x[:, 4]
    )


def linear(x: np.ndarray) -> np.ndarray:
    return 1.0 + 2.0 * x[:, 0] - 3.0 * x[:, 1] + 0.5 * x[:, 2]


GENERATORS: dict[str, Generator] = {
    "axis-steps": Generator(
        name="axis-steps",
        p=2,
        bound=20.0,
        function=axis_steps,
        plateaus=(0.0, 10.0),
    ),
    "friedman-like": Generator(
        name="friedman-like", p=5, bound=40.0, function=friedman_like
    ),
    "linear": Generator(name="linear", p=3, bound=10.0, function=linear),
}
