import re
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rtann.config import config
from rtann.errors import ConfigurationError
from rtann.types import DomainModel, Vector


class TreeConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    minsplit_fraction: float = Field(
        default=config.MINSPLIT_FRACTION,
        gt=0,
        le=1,
        description="alpha = ceil(minsplit_fraction * n); smaller nodes "
        "become leaves",
    )
    max_leaves: int | None = Field(
        default=None,
        ge=1,
        description="Leaf budget k_n, enforced by best-first growth",
    )
    min_impurity_decrease: float = Field(default=0.0, ge=0)
    seed: int = Field(default=config.DEFAULT_SEED, ge=0)


class TreeNode(BaseModel):
    """One node of the flat node table; leaves have ``left == -1``"""

    model_config = ConfigDict(frozen=True)

    prediction: float
    count: int = Field(ge=1)
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    gain: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left < 0


class TreeModel(DomainModel):
    nodes: list[TreeNode]
    importance: Vector
    leaf_count: int = Field(ge=1)
    n_features: int = Field(ge=1)
    training_size: int = Field(ge=1)
    response_bound: float = Field(ge=0)
    tree_config: TreeConfig

    @model_validator(mode="after")
    def check_structure(self) -> Self:
        if self.importance.shape != (self.n_features,):
            raise ValueError("one importance value per feature expected")
        leaves = sum(node.is_leaf for node in self.nodes)
        if leaves != self.leaf_count:
            raise ValueError(
                f"leaf_count {self.leaf_count} but {leaves} leaves stored"
            )
        budget = self.tree_config.max_leaves
        if budget is not None and leaves > budget:
            raise ValueError("leaf budget exceeded")
        return self

    @property
    def depth(self) -> int:
        depth, frontier = 0, [0]
        while True:
            frontier = [
                child
                for index in frontier
                if not self.nodes[index].is_leaf
                for child in (self.nodes[index].left, self.nodes[index].right)
            ]
            if not frontier:
                return depth
            depth += 1


class SelectionRule(BaseModel):
    """Which positive-importance features to keep: all ("used") or top m"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["used", "top"] = "used"
    m: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_m(self) -> Self:
        if self.kind == "top" and self.m is None:
            raise ValueError("rule 'top' needs m")
        return self

    @classmethod
    def parse(cls, text: str) -> "SelectionRule":
        """Read ``used`` or ``top-<m>``"""

        if text == "used":
            return cls()
        match = re.fullmatch(r"top-(\d+)", text)
        if not match:
            raise ConfigurationError(
                f"Unknown selection rule '{text}', use 'used' or 'top-<m>'"
            )
        return cls(kind="top", m=int(match.group(1)))

    def __str__(self) -> str:
        return "used" if self.kind == "used" else f"top-{self.m}"


class FeatureSelection(BaseModel):
    model_config = ConfigDict(frozen=True)

    indices: list[int]
    truncated: bool = Field(
        default=False,
        description="top-m asked for more features than carry importance",
    )


ScheduleName = Literal["sublog", "linear-violation"]
