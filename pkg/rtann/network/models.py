from typing import Annotated, Literal, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from rtann.config import config
from rtann.dataset.models import Standardization
from rtann.types import DomainModel, Matrix, Vector


class MlpConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    hidden_count: Annotated[int, Field(ge=1)] | Literal["auto"] = "auto"
    beta: Annotated[float, Field(gt=0)] | Literal["auto"] = "auto"
    # zero leaves the initialisation untouched
    learning_rate: float = Field(default=config.LEARNING_RATE, ge=0)
    max_epochs: int = Field(default=config.MAX_EPOCHS, ge=1)
    tolerance: float = Field(default=config.TOLERANCE, ge=0)
    patience: int = Field(default=config.PATIENCE, ge=1)
    seed: int = Field(default=config.DEFAULT_SEED, ge=0)


class MlpModel(DomainModel):
    """c0 + sum_i c_i * sigmoid(a_i . z + b_i) with sum |c| <= beta

    ``z`` is the raw input passed through ``standardization``; outputs are
    clamped to [-K, K].
    """

    input_dim: int = Field(ge=1)
    hidden_weights: Matrix
    hidden_biases: Vector
    output_weights: Vector
    output_bias: float
    beta: float = Field(gt=0)
    standardization: Standardization
    response_bound: float = Field(ge=0)
    training_risk: float | None = None
    epochs_run: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_parameters(self) -> Self:
        k = self.hidden_weights.shape[0]
        if self.hidden_weights.shape != (k, self.input_dim) or k < 1:
            raise ValueError(
                f"hidden weights of shape {self.hidden_weights.shape} do "
                f"not match input_dim {self.input_dim}"
            )
        if self.hidden_biases.shape != (k,):
            raise ValueError("one hidden bias per neuron expected")
        if self.output_weights.shape != (k,):
            raise ValueError("one output weight per neuron expected")
        if self.standardization.width != self.input_dim:
            raise ValueError("standardization width differs from input_dim")
        parameters = (
            self.hidden_weights,
            self.hidden_biases,
            self.output_weights,
            np.array([self.output_bias]),
        )
        if not all(np.all(np.isfinite(values)) for values in parameters):
            raise ValueError("network parameters must be finite")
        if self.output_l1 > self.beta * (1 + 1e-12):
            raise ValueError(
                f"|c0| + sum |c_i| = {self.output_l1} exceeds beta "
                f"{self.beta}"
            )
        return self

    @property
    def hidden_count(self) -> int:
        return self.hidden_weights.shape[0]

    @property
    def output_l1(self) -> float:
        return float(
            abs(self.output_bias) + np.sum(np.abs(self.output_weights))
        )


class MlpGradient(DomainModel):
    """Gradient of the empirical L2 risk, shaped like the parameters"""

    hidden_weights: Matrix
    hidden_biases: Vector
    output_weights: Vector
    output_bias: float

    def flatten(self) -> np.ndarray:
        return np.concatenate(
            [
                self.hidden_weights.ravel(),
                self.hidden_biases,
                self.output_weights,
                [self.output_bias],
            ]
        )


class EpochState(BaseModel):
    """Snapshot handed to the epoch callback after each update"""

    model_config = ConfigDict(frozen=True)

    epoch: int
    risk: float
    output_l1: float
    beta: float
