from typing import Literal, Self
import io

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from rtann.config import config
from rtann.tree.models import ScheduleName

SWEEP_COLUMNS = ["n", "repeat", "capacity", "train_risk", "holdout_risk"]
Verdict = Literal["decreasing", "not decreasing", "insufficient points"]


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    generator: str
    sizes: list[int] = Field(min_length=1)
    schedule: ScheduleName = "sublog"
    repeats: int = Field(default=config.SWEEP_REPEATS, ge=1)
    noise_sd: float = Field(default=1.0, ge=0)
    seed: int = Field(default=config.DEFAULT_SEED, ge=0)
    holdout_factor: int = Field(default=config.HOLDOUT_FACTOR, ge=1)
    minsplit_fraction: float = Field(
        default=config.MINSPLIT_FRACTION, gt=0, le=1
    )
    max_epochs: int = Field(default=config.MAX_EPOCHS, ge=1)

    @model_validator(mode="after")
    def check_sizes(self) -> Self:
        if any(n < 10 for n in self.sizes):
            raise ValueError("every sweep size must be at least 10")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sweep sizes must be strictly ascending")
        return self


class SweepRecord(BaseModel):
    """One fitted (n, repeat) cell

    ``capacity`` is the fitted leaf count for trees and the hidden width
    for networks; ``budget`` is the leaf budget the tree was allowed.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    repeat: int
    capacity: int
    budget: int | None = None
    train_risk: float = Field(ge=0, allow_inf_nan=False)
    holdout_risk: float = Field(ge=0, allow_inf_nan=False)


class SweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["tree", "mlp"]
    spec: SweepSpec
    records: list[SweepRecord]

    def median_holdout(self) -> dict[int, float]:
        """Median holdout risk per size, in size order"""

        return {
            n: float(
                np.median(
                    [r.holdout_risk for r in self.records if r.n == n]
                )
            )
            for n in self.spec.sizes
        }

    def to_csv(self) -> str:
        frame = pd.DataFrame(
            [record.model_dump() for record in self.records],
            columns=SWEEP_COLUMNS,
        )
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()
