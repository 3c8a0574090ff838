from typing import Self

import numpy as np
from pydantic import Field, model_validator

from rtann.types import DomainModel, Mask, Matrix, Vector


class Dataset(DomainModel):
    """Feature matrix and bounded response with named columns

    ``column_names`` holds the p feature names followed by the target name.
    """

    column_names: list[str]
    features: Matrix
    targets: Vector
    response_bound: float = Field(ge=0)

    @model_validator(mode="after")
    def check_shape(self) -> Self:
        n, p = self.features.shape
        if n < 1 or p < 1:
            raise ValueError("a dataset needs at least one row and column")
        if self.targets.shape != (n,):
            raise ValueError(
                f"targets have shape {self.targets.shape}, expected ({n},)"
            )
        if len(self.column_names) != p + 1:
            raise ValueError(
                f"{len(self.column_names)} column names for {p} features "
                "plus one target"
            )
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if not np.all(np.isfinite(self.targets)):
            raise ValueError("targets must be finite")
        if np.max(np.abs(self.targets)) > self.response_bound:
            raise ValueError(
                "targets exceed the declared response bound "
                f"{self.response_bound}"
            )
        return self

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def feature_names(self) -> list[str]:
        return self.column_names[:-1]

    @property
    def target_name(self) -> str:
        return self.column_names[-1]

    def subset(self, indices) -> "Dataset":
        """Rows ``indices`` as a new dataset with the same bound"""

        indices = np.asarray(indices, dtype=int)
        return Dataset(
            column_names=self.column_names,
            features=self.features[indices],
            targets=self.targets[indices],
            response_bound=self.response_bound,
        )

    def with_features(
        self, features: np.ndarray, names: list[str]
    ) -> "Dataset":
        """Same targets, replaced feature columns"""

        return Dataset(
            column_names=[*names, self.target_name],
            features=features,
            targets=self.targets,
            response_bound=self.response_bound,
        )


class Standardization(DomainModel):
    """Per-column mean and sample standard deviation

    Constant columns are flagged and map to zero.
    """

    means: Vector
    scales: Vector
    constant: Mask

    @property
    def width(self) -> int:
        return self.means.shape[0]

    def _divisor(self) -> np.ndarray:
        return np.where(self.constant, 1.0, self.scales)

    def apply(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        z = (values - self.means) / self._divisor()
        return np.where(self.constant, 0.0, z)

    def invert(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        return values * self._divisor() + self.means


class SplitPlan(DomainModel):
    train_indices: list[int]
    test_indices: list[int]
    seed: int = Field(ge=0)

    @model_validator(mode="after")
    def check_disjoint(self) -> Self:
        if not self.train_indices or not self.test_indices:
            raise ValueError("both sides of a split must be nonempty")
        if set(self.train_indices) & set(self.test_indices):
            raise ValueError("train and test indices overlap")
        return self


class SynthSpec(DomainModel):
    generator: str
    n: int = Field(ge=1)
    noise_sd: float = Field(default=0.0, ge=0)
    seed: int = Field(default=0, ge=0)
