from typing import Literal, Self

import numpy as np
from pydantic import Field, model_validator

from rtann.types import DomainModel, Matrix, Vector


class LinearModel(DomainModel):
    """y = intercept + coefficients . x, clamped to [-K, K]

    ``coefficients`` always spans all p raw features; columns outside
    ``used_features`` or listed in ``dropped`` carry zero.
    """

    method: Literal["ols", "stepwise", "pls"]
    coefficients: Vector
    intercept: float
    used_features: list[int]
    response_bound: float = Field(ge=0)
    dropped: list[int] = Field(
        default=[],
        description="Rank-deficient columns given a zero coefficient",
    )
    components: int | None = Field(default=None, ge=0)
    weights: Matrix | None = Field(
        default=None, description="PLS weight vectors, one column each"
    )
    criterion: float | None = Field(
        default=None, description="AIC of the final stepwise model"
    )

    @model_validator(mode="after")
    def check_coefficients(self) -> Self:
        p = self.coefficients.shape[0]
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("coefficients must be finite")
        if not np.isfinite(self.intercept):
            raise ValueError("intercept must be finite")
        if len(self.used_features) > p:
            raise ValueError("more used features than coefficients")
        if any(not 0 <= j < p for j in self.used_features):
            raise ValueError(f"used features must lie in [0, {p})")
        return self

    @property
    def n_features(self) -> int:
        return self.coefficients.shape[0]

    @property
    def predictor_count(self) -> int:
        """k for the adjusted R squared"""

        if self.method == "pls":
            return self.components or 0
        return len(set(self.used_features) - set(self.dropped))
