from enum import Enum
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from rtann.config import config
from rtann.hybrid.models import HybridConfig
from rtann.network.models import MlpConfig
from rtann.tree.models import SelectionRule, TreeConfig


class ModelKind(str, Enum):
    hybrid = "hybrid"
    tree = "tree"
    mlp = "mlp"
    ols = "ols"
    stepwise = "stepwise"
    pls = "pls"


class FitOptions(BaseModel):
    """Every tunable a command may pass to a model kind

    Options that do not apply to a kind are ignored by it.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=config.DEFAULT_SEED, ge=0)
    minsplit_fraction: float = Field(
        default=config.MINSPLIT_FRACTION, gt=0, le=1
    )
    max_leaves: int | None = Field(default=None, ge=1)
    selection: str = "used"
    hidden_count: Annotated[int, Field(ge=1)] | Literal["auto"] = "auto"
    beta: Annotated[float, Field(gt=0)] | Literal["auto"] = "auto"
    learning_rate: float = Field(default=config.LEARNING_RATE, ge=0)
    max_epochs: int = Field(default=config.MAX_EPOCHS, ge=1)
    pls_components: int | None = Field(default=None, ge=1)

    def tree_config(self) -> TreeConfig:
        return TreeConfig(
            minsplit_fraction=self.minsplit_fraction,
            max_leaves=self.max_leaves,
            seed=self.seed,
        )

    def mlp_config(self) -> MlpConfig:
        return MlpConfig(
            hidden_count=self.hidden_count,
            beta=self.beta,
            learning_rate=self.learning_rate,
            max_epochs=self.max_epochs,
            seed=self.seed,
        )

    def hybrid_config(self) -> HybridConfig:
        return HybridConfig(
            tree_cfg=self.tree_config(),
            mlp_cfg=self.mlp_config(),
            selection_rule=SelectionRule.parse(self.selection),
        )


class ModelFile(BaseModel):
    """On-disk form of a fitted model

    ``schema`` lists the feature columns in training order; ``payload`` is
    the kind-specific model document.
    """

    model_config = ConfigDict(populate_by_name=True)

    format_version: int = Field(ge=1)
    kind: ModelKind
    columns: list[str] = Field(alias="schema")
    target: str
    payload: dict[str, Any]
