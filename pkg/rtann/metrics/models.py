from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class MetricsReport(BaseModel):
    """MAE, RMSE, MAPE, R squared and adjusted R squared of one model

    MAPE and both R squared values are percentages. A value that is
    undefined for the data is ``None`` and ``undefined`` says why.
    """

    model_config = ConfigDict(frozen=True)

    mae: float = Field(ge=0)
    rmse: float = Field(ge=0)
    mape_percent: float | None = Field(default=None, ge=0)
    r2_percent: float | None = Field(default=None, le=100)
    adj_r2_percent: float | None = None
    n: int = Field(ge=1)
    k: int = Field(ge=0)
    undefined: dict[str, str] = {}

    @model_validator(mode="after")
    def check_orderings(self) -> Self:
        if self.rmse < self.mae - 1e-12 * max(1.0, self.mae):
            raise ValueError(f"rmse {self.rmse} below mae {self.mae}")
        if (
            self.r2_percent is not None
            and self.adj_r2_percent is not None
            and self.k >= 1
            and self.adj_r2_percent > self.r2_percent + 1e-9
        ):
            raise ValueError("adjusted R squared exceeds R squared")
        return self


class ComparisonTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    csv: str
