from dataclasses import dataclass
from heapq import heappop, heappush
import logging
import math

import numpy as np

from rtann.dataset.models import Dataset
from rtann.errors import ConfigurationError, DatasetError, DimensionError
from rtann.tree.models import (
    FeatureSelection,
    ScheduleName,
    SelectionRule,
    TreeConfig,
    TreeModel,
    TreeNode,
)
from rtann.types import clamp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    gain: float


def minsplit_count(minsplit_fraction: float, n: int) -> int:
    """alpha: nodes with fewer training rows than this become leaves"""

    # 0.1 * 30 evaluates to 3.0000000000000004; keep it at 3
    return max(1, math.ceil(minsplit_fraction * n - 1e-9))


def best_split(features: np.ndarray, targets: np.ndarray) -> Split | None:
    """Exhaustive search of midpoint thresholds for the largest SSE drop

    Ties (within floating point noise) go to the lowest feature index, then
    the lowest threshold.
    """

    m = len(targets)
    centred = targets - targets.mean()
    total = float(np.dot(centred, centred))
    if m < 2 or total <= 0:
        return None

    tie = 1e-12 * total
    counts = np.arange(1, m)
    best: Split | None = None

    for feature in range(features.shape[1]):
        order = np.argsort(features[:, feature], kind="stable")
        values = features[order, feature]
        valid = values[1:] > values[:-1]
        if not valid.any():
            continue

        ys = centred[order]
        left_sum = np.cumsum(ys)[:-1]
        left_sq = np.cumsum(ys * ys)[:-1]
        right_sum = ys.sum() - left_sum
        right_sq = total - left_sq
        left_sse = left_sq - left_sum**2 / counts
        right_sse = right_sq - right_sum**2 / (m - counts)
        gains = np.where(valid, total - left_sse - right_sse, -np.inf)

        top = gains.max()
        position = int(np.flatnonzero(gains >= top - tie)[0])
        if best is not None and gains[position] <= best.gain + tie:
            continue

        low, high = values[position], values[position + 1]
        threshold = (low + high) / 2
        if not low <= threshold < high:
            threshold = low
        best = Split(feature, float(threshold), float(gains[position]))

    return best


def fit_tree(ds: Dataset, cfg: TreeConfig | None = None) -> TreeModel:
    """Grow a regression tree best-first

    The frontier node with the largest achievable SSE reduction is split
    next, until the leaf budget is reached or no node may split. A node
    splits when it holds at least alpha rows, its targets differ and the
    reduction exceeds ``min_impurity_decrease``. Leaves predict the mean
    training target.
    """

    cfg = cfg or TreeConfig()
    features, targets = ds.features, ds.targets
    n, p = features.shape
    if n < 1:
        raise DatasetError("Cannot fit a tree on an empty dataset")

    alpha = minsplit_count(cfg.minsplit_fraction, n)
    members: list[np.ndarray] = []
    nodes: list[dict] = []
    frontier: list[tuple[float, int, Split]] = []
    importance = np.zeros(p)

    def add_node(indices: np.ndarray) -> int:
        members.append(indices)
        nodes.append(
            {
                "prediction": float(np.mean(targets[indices])),
                "count": len(indices),
            }
        )
        node_id = len(nodes) - 1

        if len(indices) >= max(alpha, 2) and np.ptp(targets[indices]) > 0:
            split = best_split(features[indices], targets[indices])
            if split is not None and split.gain > cfg.min_impurity_decrease:
                heappush(frontier, (-split.gain, node_id, split))
        return node_id

    add_node(np.arange(n))
    leaves = 1
    while frontier and (cfg.max_leaves is None or leaves < cfg.max_leaves):
        _, node_id, split = heappop(frontier)
        indices = members[node_id]
        goes_left = features[indices, split.feature] <= split.threshold

        logger.debug(
            f"Split node {node_id} ({len(indices)} rows) on feature "
            f"{split.feature} at {split.threshold:.6g}, gain {split.gain:.6g}"
        )
        nodes[node_id].update(
            feature=split.feature,
            threshold=split.threshold,
            gain=split.gain,
            left=add_node(indices[goes_left]),
            right=add_node(indices[~goes_left]),
        )
        importance[split.feature] += split.gain
        leaves += 1

    logger.info(f"Fitted tree: {leaves} leaves, alpha={alpha}, n={n}")
    return TreeModel(
        nodes=[TreeNode(**node) for node in nodes],
        importance=importance,
        leaf_count=leaves,
        n_features=p,
        training_size=n,
        response_bound=ds.response_bound,
        tree_config=cfg,
    )


def _leaf_of(model: TreeModel, x: np.ndarray) -> TreeNode:
    node = model.nodes[0]
    while not node.is_leaf:
        if x[node.feature] <= node.threshold:
            node = model.nodes[node.left]
        else:
            node = model.nodes[node.right]
    return node


def _check_width(model: TreeModel, width: int) -> None:
    if width != model.n_features:
        raise DimensionError(
            f"Tree expects {model.n_features} features, got {width}"
        )


def predict_tree(model: TreeModel, x) -> float:
    """Route x to its leaf ("go left iff value <= threshold")"""

    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"Expected one feature vector, got {x.shape}")
    _check_width(model, x.shape[0])
    leaf = _leaf_of(model, x)
    return float(clamp(leaf.prediction, model.response_bound))


def predict_tree_rows(model: TreeModel, rows) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2:
        raise DimensionError(f"Expected a row matrix, got {rows.shape}")
    _check_width(model, rows.shape[1])

    feature = np.array([node.feature for node in model.nodes])
    threshold = np.array([node.threshold for node in model.nodes])
    left = np.array([node.left for node in model.nodes])
    right = np.array([node.right for node in model.nodes])
    prediction = np.array([node.prediction for node in model.nodes])

    position = np.zeros(len(rows), dtype=int)
    active = left[position] >= 0
    while active.any():
        at = position[active]
        values = rows[active, feature[at]]
        position[active] = np.where(
            values <= threshold[at], left[at], right[at]
        )
        active = left[position] >= 0
    return clamp(prediction[position], model.response_bound)


def feature_importance(model: TreeModel) -> np.ndarray:
    """Unnormalised SSE reduction credited to each feature"""

    return model.importance.copy()


def select_features(
    model: TreeModel, rule: SelectionRule | None = None
) -> FeatureSelection:
    """Positive-importance features, most important first

    Ties are broken by ascending feature index.
    """

    rule = rule or SelectionRule()
    ranked = sorted(
        (j for j in range(model.n_features) if model.importance[j] > 0),
        key=lambda j: (-model.importance[j], j),
    )
    if rule.kind == "used":
        return FeatureSelection(indices=ranked)

    truncated = rule.m > len(ranked)
    if truncated:
        logger.warning(
            f"Rule {rule} asked for {rule.m} features but only "
            f"{len(ranked)} carry importance"
        )
    return FeatureSelection(indices=ranked[: rule.m], truncated=truncated)


def leaf_schedule(n: int, rule: ScheduleName = "sublog") -> int:
    """Leaf budget k_n for a training size n

    ``sublog`` grows as n / (ln n)^2, which is o(n / log n);
    ``linear-violation`` grows as n / 2 and breaks that rate on purpose.
    """

    if n < 2:
        raise ConfigurationError(f"Leaf schedule needs n >= 2, got {n}")
    if rule == "sublog":
        return math.ceil(n / math.log(n) ** 2)
    if rule == "linear-violation":
        return math.ceil(n / 2)
    raise ConfigurationError(f"Unknown schedule '{rule}'")


def tree_rules(model: TreeModel, names: list[str]) -> list[str]:
    """One readable rule per leaf, in left-to-right order"""

    rules = []
    stack: list[tuple[int, list[str]]] = [(0, [])]
    while stack:
        index, conditions = stack.pop()
        node = model.nodes[index]
        if node.is_leaf:
            premise = " and ".join(conditions) or "always"
            rules.append(
                f"if {premise} then {node.prediction:.4g} "
                f"(n={node.count})"
            )
            continue
        name = names[node.feature]
        stack.append(
            (node.right, [*conditions, f"{name} > {node.threshold:.6g}"])
        )
        stack.append(
            (node.left, [*conditions, f"{name} <= {node.threshold:.6g}"])
        )
    return rules


def _node_document(model: TreeModel, index: int) -> dict:
    node = model.nodes[index]
    if node.is_leaf:
        return {"prediction": node.prediction, "count": node.count}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "gain": node.gain,
        "prediction": node.prediction,
        "count": node.count,
        "left": _node_document(model, node.left),
        "right": _node_document(model, node.right),
    }


def tree_document(model: TreeModel) -> dict:
    """Nested JSON-ready form of a fitted tree"""

    return {
        "n_features": model.n_features,
        "training_size": model.training_size,
        "response_bound": model.response_bound,
        "leaf_count": model.leaf_count,
        "importance": model.importance.tolist(),
        "config": model.tree_config.model_dump(mode="json"),
        "root": _node_document(model, 0),
    }


def tree_from_document(document: dict) -> TreeModel:
    nodes: list[dict] = []

    def add(entry: dict) -> int:
        index = len(nodes)
        nodes.append(
            {"prediction": entry["prediction"], "count": entry["count"]}
        )
        if "left" not in entry:
            return index
        left = add(entry["left"])
        right = add(entry["right"])
        nodes[index].update(
            feature=entry["feature"],
            threshold=entry["threshold"],
            gain=entry.get("gain", 0.0),
            left=left,
            right=right,
        )
        return index

    add(document["root"])
    return TreeModel(
        nodes=[TreeNode(**node) for node in nodes],
        importance=document["importance"],
        leaf_count=document["leaf_count"],
        n_features=document["n_features"],
        training_size=document["training_size"],
        response_bound=document["response_bound"],
        tree_config=TreeConfig(**document["config"]),
    )
