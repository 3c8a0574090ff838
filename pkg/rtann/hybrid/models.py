from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rtann.network.models import MlpConfig, MlpModel
from rtann.tree.models import SelectionRule, TreeConfig, TreeModel
from rtann.types import DomainModel

TREE_OUTPUT_COLUMN = "tree_output"


class HybridConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tree_cfg: TreeConfig = Field(default_factory=TreeConfig)
    mlp_cfg: MlpConfig = Field(default_factory=MlpConfig)
    selection_rule: SelectionRule = Field(default_factory=SelectionRule)


class HybridModel(DomainModel):
    """Tree, the features it found important, and the network on top

    The network sees the selected raw columns followed by the tree's
    prediction, so its input width is ``len(selected) + 1``. ``fallback``
    marks a model whose tree never split, in which case every feature is
    selected.
    """

    selected: list[int]
    feature_names: list[str]
    tree: TreeModel
    mlp: MlpModel
    response_bound: float = Field(ge=0)
    fallback: bool = False

    @model_validator(mode="after")
    def check_inputs(self) -> Self:
        p = self.tree.n_features
        if len(self.feature_names) != p:
            raise ValueError(
                f"{len(self.feature_names)} names for {p} features"
            )
        if len(set(self.selected)) != len(self.selected):
            raise ValueError("selected feature indices repeat")
        if any(not 0 <= j < p for j in self.selected):
            raise ValueError(f"selected indices must lie in [0, {p})")
        if self.mlp.input_dim != len(self.selected) + 1:
            raise ValueError(
                f"network input width {self.mlp.input_dim} is not "
                f"{len(self.selected)} selected features + 1"
            )
        return self

    @property
    def input_dim(self) -> int:
        return self.mlp.input_dim

    @property
    def network_inputs(self) -> list[str]:
        return [
            *(self.feature_names[j] for j in self.selected),
            TREE_OUTPUT_COLUMN,
        ]


class ImportanceRow(BaseModel):
    name: str
    importance: float


class HybridReport(BaseModel):
    """What ``explain`` tells about a fitted hybrid model"""

    rows: list[ImportanceRow]
    fallback: bool
    leaf_count: int
    input_dim: int
    hidden_count: int
    beta: float
    training_risk: float | None
    rules: list[str] = []

    def render(self) -> str:
        lines = []
        if self.fallback:
            lines.append("fallback: no informative split")
            lines.append("features (all):")
        else:
            lines.append("selected features:")
        width = max(len(row.name) for row in self.rows)
        lines.extend(
            f"  {row.name:<{width}}  {row.importance:.6g}" for row in self.rows
        )
        risk = (
            f"{self.training_risk:.6g}"
            if self.training_risk is not None
            else "n/a"
        )
        lines.extend(
            [
                f"tree leaves: {self.leaf_count}",
                f"d_m: {self.input_dim}",
                f"k: {self.hidden_count}",
                f"beta: {self.beta:.6g}",
                f"training risk: {risk}",
            ]
        )
        if self.rules:
            lines.append("tree rules:")
            lines.extend(f"  {rule}" for rule in self.rules)
        return "\n".join(lines) + "\n"
