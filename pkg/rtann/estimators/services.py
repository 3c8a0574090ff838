"""One handler per model kind, and the model file format.

Commands never branch on the model kind themselves: they look up the
``Estimator`` for it and call its fit, predict and document hooks.
"""

from pathlib import Path
from typing import Any, Callable
import json
import logging

import numpy as np
import pydantic

from rtann.baselines.models import LinearModel
from rtann.baselines.services import fit_ols, fit_pls, fit_stepwise
from rtann.baselines.services import predict_linear_rows
from rtann.config import config
from rtann.dataset.models import Dataset
from rtann.errors import ConfigurationError, ModelFormatError
from rtann.estimators.models import FitOptions, ModelFile, ModelKind
from rtann.hybrid.services import (
    explain,
    fit_hybrid,
    hybrid_document,
    hybrid_from_document,
    predict_hybrid_rows,
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


class Estimator:
    def __init__(
        self,
        kind: ModelKind,
        fit: Callable[[Dataset, FitOptions], Any],
        predict_rows: Callable[[Any, np.ndarray], np.ndarray],
        encode: Callable[[Any], dict],
        decode: Callable[[dict], Any],
        predictor_count: Callable[[Any], int],
        describe: Callable[[Any, list[str]], str],
    ):
        self.kind = kind
        self.fit = fit
        self.predict_rows = predict_rows
        self.encode = encode
        self.decode = decode
        self.predictor_count = predictor_count
        self.describe = describe

    def __repr__(self) -> str:
        return f"Estimator({self.kind.value})"


def _describe_tree(model, names: list[str]) -> str:
    lines = [
        f"leaves: {model.leaf_count}",
        f"depth: {model.depth}",
        "importance:",
    ]
    ranked = np.argsort(-model.importance, kind="stable")
    lines.extend(
        f"  {names[j]}  {model.importance[j]:.6g}" for j in ranked
    )
    lines.append("rules:")
    lines.extend(f"  {rule}" for rule in tree_rules(model, names))
    return "\n".join(lines) + "\n"


def _describe_mlp(model: MlpModel, names: list[str]) -> str:
    risk = model.training_risk
    return (
        f"inputs: {', '.join(names)}\n"
        f"d_m: {model.input_dim}\n"
        f"k: {model.hidden_count}\n"
        f"beta: {model.beta:.6g}\n"
        f"|c0| + sum |c|: {model.output_l1:.6g}\n"
        f"training risk: {'n/a' if risk is None else f'{risk:.6g}'}\n"
        f"epochs: {model.epochs_run}\n"
    )


def _describe_linear(model: LinearModel, names: list[str]) -> str:
    lines = [f"method: {model.method}", f"intercept: {model.intercept:.6g}"]
    lines.append("coefficients:")
    lines.extend(
        f"  {names[j]}  {model.coefficients[j]:.6g}"
        for j in range(model.n_features)
    )
    if model.method == "stepwise":
        used = [names[j] for j in model.used_features]
        lines.append(f"selected: {', '.join(used) or '(none)'}")
        lines.append(f"AIC: {model.criterion:.6g}")
    if model.method == "pls":
        lines.append(f"components: {model.components}")
    if model.dropped:
        dropped = ", ".join(names[j] for j in model.dropped)
        lines.append(f"rank-deficient, zeroed: {dropped}")
    return "\n".join(lines) + "\n"


def _linear(kind: ModelKind, fit: Callable) -> Estimator:
    return Estimator(
        kind=kind,
        fit=fit,
        predict_rows=predict_linear_rows,
        encode=lambda model: model.model_dump(mode="json"),
        decode=LinearModel.model_validate,
        predictor_count=lambda model: model.predictor_count,
        describe=_describe_linear,
    )


ESTIMATORS: dict[ModelKind, Estimator] = {
    ModelKind.hybrid: Estimator(
        kind=ModelKind.hybrid,
        fit=lambda ds, options: fit_hybrid(ds, options.hybrid_config()),
        predict_rows=predict_hybrid_rows,
        encode=hybrid_document,
        decode=hybrid_from_document,
        predictor_count=lambda model: model.input_dim,
        describe=lambda model, names: explain(model).render(),
    ),
    ModelKind.tree: Estimator(
        kind=ModelKind.tree,
        fit=lambda ds, options: fit_tree(ds, options.tree_config()),
        predict_rows=predict_tree_rows,
        encode=tree_document,
        decode=tree_from_document,
        predictor_count=lambda model: len(select_features(model).indices),
        describe=_describe_tree,
    ),
    ModelKind.mlp: Estimator(
        kind=ModelKind.mlp,
        fit=lambda ds, options: fit_mlp(ds, options.mlp_config()),
        predict_rows=predict_mlp_rows,
        encode=lambda model: model.model_dump(mode="json"),
        decode=MlpModel.model_validate,
        predictor_count=lambda model: model.input_dim,
        describe=_describe_mlp,
    ),
    ModelKind.ols: _linear(ModelKind.ols, lambda ds, options: fit_ols(ds)),
    ModelKind.stepwise: _linear(
        ModelKind.stepwise, lambda ds, options: fit_stepwise(ds)
    ),
    ModelKind.pls: _linear(
        ModelKind.pls,
        lambda ds, options: fit_pls(ds, options.pls_components),
    ),
}


def get_estimator(kind: ModelKind | str) -> Estimator:
    try:
        return ESTIMATORS[ModelKind(kind)]
    except ValueError:
        raise ConfigurationError(
            f"Unknown model kind '{kind}', choose one of: "
            f"{', '.join(k.value for k in ModelKind)}"
        )


def to_model_file(kind: ModelKind, model: Any, ds: Dataset) -> ModelFile:
    return ModelFile(
        format_version=config.MODEL_FORMAT_VERSION,
        kind=kind,
        columns=ds.feature_names,
        target=ds.target_name,
        payload=get_estimator(kind).encode(model),
    )


def save_model(
    path: str | Path, kind: ModelKind, model: Any, ds: Dataset
) -> Path:
    """Write the model as JSON; same model, same bytes"""

    path = Path(path)
    document = to_model_file(kind, model, ds)
    path.write_text(
        document.model_dump_json(by_alias=True, indent=2) + "\n",
        encoding="utf-8",
    )
    logger.info(f"Saved {kind.value} model to {path}")
    return path


def load_model(path: str | Path) -> tuple[ModelFile, Any]:
    """Read a model file and rebuild its model

    Files written by a newer format version are refused.
    """

    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"Model file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"Model file is not valid JSON: {e}")

    version = raw.get("format_version") if isinstance(raw, dict) else None
    if isinstance(version, int) and version > config.MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"Model file format {version} is newer than the supported "
            f"format {config.MODEL_FORMAT_VERSION}"
        )

    try:
        document = ModelFile.model_validate(raw)
        model = get_estimator(document.kind).decode(document.payload)
    except (pydantic.ValidationError, KeyError, TypeError) as e:
        raise ModelFormatError(f"Malformed model file {path}: {e}")
    return document, model
