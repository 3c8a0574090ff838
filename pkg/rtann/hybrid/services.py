import logging

import numpy as np

from rtann.dataset.models import Dataset
from rtann.errors import DatasetError, DimensionError
from rtann.hybrid.models import (
    TREE_OUTPUT_COLUMN,
    HybridConfig,
    HybridModel,
    HybridReport,
    ImportanceRow,
)
from rtann.network.models import MlpModel
from rtann.network.services import fit_mlp, predict_mlp_rows
from rtann.tree.services import (
    fit_tree,
    predict_tree_rows,
    select_features,
    tree_document,
    tree_from_document,
    tree_rules,
)

logger = logging.getLogger(__name__)


def augment(
    rows: np.ndarray, selected: list[int], tree_output: np.ndarray
) -> np.ndarray:
    """Selected columns in selection order, then the tree prediction"""

    return np.column_stack([rows[:, selected], tree_output])


def fit_hybrid(ds: Dataset, cfg: HybridConfig | None = None) -> HybridModel:
    """Fit the tree, keep its important features, train the network on them

    The tree's in-sample predictions become the last network input.
    """

    cfg = cfg or HybridConfig()
    if ds.n < 2:
        raise DatasetError(f"Hybrid training needs n >= 2, got {ds.n}")

    tree = fit_tree(ds, cfg.tree_cfg)
    selected = select_features(tree, cfg.selection_rule).indices
    fallback = not selected
    if fallback:
        logger.warning(
            "Tree found no informative split; feeding all "
            f"{ds.p} features to the network"
        )
        selected = list(range(ds.p))

    names = [ds.feature_names[j] for j in selected]
    features = augment(
        ds.features, selected, predict_tree_rows(tree, ds.features)
    )
    mlp = fit_mlp(
        ds.with_features(features, [*names, TREE_OUTPUT_COLUMN]), cfg.mlp_cfg
    )

    logger.info(f"Fitted hybrid: selected {names}, d_m={mlp.input_dim}")
    return HybridModel(
        selected=selected,
        feature_names=ds.feature_names,
        tree=tree,
        mlp=mlp,
        response_bound=ds.response_bound,
        fallback=fallback,
    )


def predict_hybrid_rows(model: HybridModel, rows) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2:
        raise DimensionError(f"Expected a row matrix, got {rows.shape}")
    tree_output = predict_tree_rows(model.tree, rows)
    return predict_mlp_rows(
        model.mlp, augment(rows, model.selected, tree_output)
    )


def predict_hybrid(model: HybridModel, x_raw) -> float:
    x_raw = np.asarray(x_raw, dtype=float)
    if x_raw.ndim != 1:
        raise DimensionError(f"Expected one input vector, got {x_raw.shape}")
    return float(predict_hybrid_rows(model, x_raw[np.newaxis, :])[0])


def explain(model: HybridModel) -> HybridReport:
    rows = [
        ImportanceRow(
            name=model.feature_names[j],
            importance=float(model.tree.importance[j]),
        )
        for j in model.selected
    ]
    return HybridReport(
        rows=rows,
        fallback=model.fallback,
        leaf_count=model.tree.leaf_count,
        input_dim=model.mlp.input_dim,
        hidden_count=model.mlp.hidden_count,
        beta=model.mlp.beta,
        training_risk=model.mlp.training_risk,
        rules=tree_rules(model.tree, model.feature_names),
    )


def hybrid_document(model: HybridModel) -> dict:
    """Composite document: selection, tree document and network"""

    return {
        "selected": model.selected,
        "feature_names": model.feature_names,
        "fallback": model.fallback,
        "response_bound": model.response_bound,
        "tree": tree_document(model.tree),
        "mlp": model.mlp.model_dump(mode="json"),
    }


def hybrid_from_document(document: dict) -> HybridModel:
    return HybridModel(
        selected=document["selected"],
        feature_names=document["feature_names"],
        fallback=document["fallback"],
        response_bound=document["response_bound"],
        tree=tree_from_document(document["tree"]),
        mlp=MlpModel.model_validate(document["mlp"]),
    )
