import json

import numpy as np
import pytest

from rtann.errors import ConfigurationError, ModelFormatError
from rtann.estimators.models import FitOptions, ModelKind
from rtann.estimators.services import get_estimator, load_model, save_model

QUICK = FitOptions(max_epochs=100)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_saved_model_predicts_identically(tmp_path, friedman, kind):
    estimator = get_estimator(kind)
    model = estimator.fit(friedman, QUICK)
    rows = np.random.default_rng(0).uniform(size=(1000, friedman.p))

    path = save_model(tmp_path / "model.json", kind, model, friedman)
    document, restored = load_model(path)

    assert document.kind == kind
    assert document.columns == friedman.feature_names
    assert document.target == "y"
    np.testing.assert_array_equal(
        estimator.predict_rows(restored, rows),
        estimator.predict_rows(model, rows),
    )


@pytest.mark.parametrize("kind", [ModelKind.hybrid, ModelKind.pls])
def test_same_model_same_bytes(tmp_path, friedman, kind):
    estimator = get_estimator(kind)

    first = save_model(
        tmp_path / "a.json", kind, estimator.fit(friedman, QUICK), friedman
    )
    second = save_model(
        tmp_path / "b.json", kind, estimator.fit(friedman, QUICK), friedman
    )

    assert first.read_bytes() == second.read_bytes()


def test_model_file_layout(tmp_path, step_data):
    model = get_estimator("tree").fit(step_data, FitOptions())

    path = save_model(tmp_path / "m.json", ModelKind.tree, model, step_data)
    raw = json.loads(path.read_text())

    assert raw["format_version"] == 1
    assert raw["kind"] == "tree"
    assert raw["schema"] == ["x1"]
    assert raw["payload"]["leaf_count"] == 2


def test_newer_format_is_refused(tmp_path, step_data):
    model = get_estimator("ols").fit(step_data, FitOptions())
    path = save_model(tmp_path / "m.json", ModelKind.ols, model, step_data)
    raw = json.loads(path.read_text())
    path.write_text(json.dumps({**raw, "format_version": 2}))

    with pytest.raises(ModelFormatError, match="newer"):
        load_model(path)


@pytest.mark.parametrize(
    "content",
    [
        "not json",
        json.dumps([1, 2]),
        json.dumps(
            {
                "format_version": 1,
                "kind": "forest",
                "schema": ["x1"],
                "target": "y",
                "payload": {},
            }
        ),
        json.dumps(
            {
                "format_version": 1,
                "kind": "tree",
                "schema": ["x1"],
                "target": "y",
                "payload": {},
            }
        ),
    ],
)
def test_broken_files_are_refused(tmp_path, content):
    path = tmp_path / "m.json"
    path.write_text(content)

    with pytest.raises(ModelFormatError):
        load_model(path)


def test_missing_model_file(tmp_path):
    with pytest.raises(ModelFormatError, match="not found"):
        load_model(tmp_path / "absent.json")


def test_unknown_kind():
    with pytest.raises(ConfigurationError, match="forest"):
        get_estimator("forest")


def test_predictor_counts(friedman):
    tree = get_estimator("tree")
    hybrid = get_estimator("hybrid")
    ols = get_estimator("ols")

    tree_model = tree.fit(friedman, QUICK)
    hybrid_model = hybrid.fit(friedman, QUICK)

    assert tree.predictor_count(tree_model) == int(
        np.sum(tree_model.importance > 0)
    )
    assert hybrid.predictor_count(hybrid_model) == len(
        hybrid_model.selected
    ) + 1
    assert ols.predictor_count(ols.fit(friedman, QUICK)) == friedman.p


def test_describe_mentions_kind_details(friedman):
    stepwise = get_estimator("stepwise")
    text = stepwise.describe(
        stepwise.fit(friedman, QUICK), friedman.feature_names
    )

    assert text.startswith("method: stepwise\n")
    assert "AIC:" in text


def test_fit_options_reject_bad_selection():
    with pytest.raises(ConfigurationError):
        FitOptions(selection="best").hybrid_config()
