import math

import numpy as np
import pydantic
import pytest

from rtann.dataset.models import SynthSpec
from rtann.dataset.services import fit_standardization, split, synthesize
from rtann.errors import ConfigurationError, DimensionError, DivergenceError
from rtann.network.models import MlpConfig, MlpModel
from rtann.network.services import (
    beta_auto,
    empirical_risk,
    fit_mlp,
    hidden_count_auto,
    init_mlp,
    predict_mlp,
    predict_mlp_rows,
    risk_gradient,
    sigmoid,
)

from tests.helpers import make_dataset

PARAMETERS = ("hidden_weights", "hidden_biases", "output_weights")


def _network(rng, k=3, d=2, n=16, beta=100.0):
    x = rng.normal(size=(n, d))
    model = MlpModel(
        input_dim=d,
        hidden_weights=rng.normal(size=(k, d)),
        hidden_biases=rng.normal(size=k),
        output_weights=rng.uniform(-1, 1, size=k),
        output_bias=float(rng.normal()),
        beta=beta,
        standardization=fit_standardization(x),
        response_bound=1e6,
    )
    return model, x


def _numeric_gradient(model, ds, h=1e-5):
    gradient = []
    for name in PARAMETERS:
        values = getattr(model, name)
        for index in np.ndindex(values.shape):
            shifted = []
            for step in (h, -h):
                changed = values.copy()
                changed[index] += step
                shifted.append(
                    empirical_risk(
                        model.model_copy(update={name: changed}), ds
                    )
                )
            gradient.append((shifted[0] - shifted[1]) / (2 * h))
    shifted = [
        empirical_risk(
            model.model_copy(update={"output_bias": model.output_bias + s}),
            ds,
        )
        for s in (h, -h)
    ]
    gradient.append((shifted[0] - shifted[1]) / (2 * h))
    return np.array(gradient)


@pytest.mark.parametrize("x, expected", [(0, 0.5), (1, 0.7310585786300049)])
def test_sigmoid_values(x, expected):
    assert sigmoid(x) == pytest.approx(expected, abs=1e-15)


def test_sigmoid_limits():
    assert sigmoid(50) == pytest.approx(1.0, abs=1e-15)
    assert sigmoid(-50) == pytest.approx(0.0, abs=1e-15)
    assert sigmoid(-1000) == 0.0


def test_sigmoid_is_monotone():
    values = sigmoid(np.linspace(-40, 40, 801))
    assert np.all(np.diff(values) >= 0)


@pytest.mark.parametrize(
    "n, d_m, k", [(100, 5, 2), (3200, 5, 9), (2, 100, 1), (350, 3, 4)]
)
def test_hidden_count_auto(n, d_m, k):
    assert hidden_count_auto(n, d_m) == k


def test_hidden_count_needs_two_points():
    with pytest.raises(ConfigurationError):
        hidden_count_auto(1, 3)


def test_beta_auto_grows_with_n():
    assert beta_auto(100, 10) == pytest.approx(20 * math.log(100))
    assert beta_auto(1000, 10) > beta_auto(100, 10)
    assert beta_auto(100, 0) == pytest.approx(2 * math.log(100))


def test_constant_network():
    model, _ = _network(np.random.default_rng(0))
    model = model.model_copy(
        update={
            "hidden_weights": np.zeros((3, 2)),
            "output_weights": np.zeros(3),
            "output_bias": 3.0,
        }
    )
    assert predict_mlp(model, [5.0, -2.0]) == 3.0
    assert predict_mlp(model, [0.0, 0.0]) == 3.0


def test_half_sigmoid_network():
    x = np.array([[0.0], [1.0], [2.0]])
    model = MlpModel(
        input_dim=1,
        hidden_weights=[[0.0]],
        hidden_biases=[0.0],
        output_weights=[2.0],
        output_bias=0.0,
        beta=5.0,
        standardization=fit_standardization(x),
        response_bound=10.0,
    )
    assert predict_mlp(model, [7.0]) == 1.0


def test_matches_scalar_formula():
    rng = np.random.default_rng(5)
    model, x = _network(rng, k=2, d=3, n=10)
    point = rng.normal(size=3)

    stats = model.standardization
    z = [(point[j] - stats.means[j]) / stats.scales[j] for j in range(3)]
    expected = model.output_bias
    for i in range(2):
        activation = model.hidden_biases[i] + sum(
            model.hidden_weights[i, j] * z[j] for j in range(3)
        )
        expected += model.output_weights[i] / (1 + math.exp(-activation))

    assert predict_mlp(model, point) == pytest.approx(expected, abs=1e-14)


def test_output_is_clamped():
    model, _ = _network(np.random.default_rng(1))
    model = model.model_copy(update={"output_bias": 50.0, "beta": 60.0})
    capped = model.model_copy(update={"response_bound": 2.0})

    assert predict_mlp(capped, [0.1, 0.2]) == 2.0


def test_dimension_mismatch():
    model, _ = _network(np.random.default_rng(2))
    with pytest.raises(DimensionError):
        predict_mlp(model, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionError):
        predict_mlp_rows(model, [1.0, 2.0])


@pytest.mark.parametrize("seed", range(20))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    model, x = _network(rng)
    ds = make_dataset(x, rng.normal(size=16), bound=100)

    analytic = risk_gradient(model, ds).flatten()
    numeric = _numeric_gradient(model, ds)

    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-3)
    assert np.max(np.abs(analytic - numeric) / scale) < 1e-5


def test_zero_residuals_give_zero_gradient():
    rng = np.random.default_rng(3)
    model, x = _network(rng)
    ds = make_dataset(x, predict_mlp_rows(model, x), bound=1e6)

    np.testing.assert_allclose(
        risk_gradient(model, ds).flatten(), 0.0, atol=1e-12
    )


def test_output_gradient_is_linear_in_residuals():
    rng = np.random.default_rng(4)
    model, x = _network(rng)
    y = rng.normal(size=16)
    outputs = predict_mlp_rows(model, x)

    once = risk_gradient(model, make_dataset(x, y, bound=1e6))
    twice = risk_gradient(model, make_dataset(x, 2 * y - outputs, bound=1e6))

    np.testing.assert_allclose(
        twice.output_weights, 2 * once.output_weights, rtol=1e-10
    )
    assert twice.output_bias == pytest.approx(2 * once.output_bias, rel=1e-10)


def test_constant_target_is_fitted_exactly():
    rng = np.random.default_rng(6)
    ds = make_dataset(rng.uniform(size=(30, 2)), np.full(30, 3.5))

    model = fit_mlp(ds, MlpConfig(hidden_count=4, max_epochs=200))

    assert model.training_risk <= 1e-6
    assert predict_mlp(model, [0.3, 0.9]) == pytest.approx(3.5, abs=1e-6)


def test_nearly_constant_target_stays_at_the_mean():
    rng = np.random.default_rng(8)
    targets = 49.74 + 1e-6 * rng.normal(size=50)
    ds = make_dataset(rng.uniform(size=(50, 2)), targets)

    start = init_mlp(ds, MlpConfig(max_epochs=500))
    model = fit_mlp(ds, MlpConfig(max_epochs=500))

    np.testing.assert_array_equal(start.output_weights, 0)
    assert model.training_risk <= np.var(targets)
    assert np.max(np.abs(model.hidden_weights)) < 10


def test_fitted_parameters_are_read_only(friedman):
    model = fit_mlp(friedman, MlpConfig(max_epochs=20))

    for name in PARAMETERS:
        assert not getattr(model, name).flags.writeable
    with pytest.raises(ValueError):
        model.output_weights[0] = 1e6


def test_zero_learning_rate_keeps_initialisation(friedman):
    cfg = MlpConfig(learning_rate=0.0, max_epochs=40, seed=9)

    start = init_mlp(friedman, cfg)
    fitted = fit_mlp(friedman, cfg)

    for name in PARAMETERS:
        np.testing.assert_array_equal(
            getattr(fitted, name), getattr(start, name)
        )
    assert fitted.output_bias == start.output_bias


def test_initialisation_ranges(friedman):
    cfg = MlpConfig(hidden_count=6, seed=1)
    model = init_mlp(friedman, cfg)

    limit = 1 / math.sqrt(friedman.p)
    assert np.all(np.abs(model.hidden_weights) <= limit)
    assert np.all(np.abs(model.hidden_biases) <= limit)
    assert np.all(np.abs(model.output_weights) <= model.beta / 28)
    assert model.output_bias == pytest.approx(friedman.targets.mean())
    assert model.hidden_count == 6


@pytest.mark.parametrize("seed", range(5))
def test_constraint_holds_after_every_epoch(friedman, seed):
    states = []
    cfg = MlpConfig(beta=2.0, max_epochs=150, seed=seed)

    model = fit_mlp(friedman, cfg, on_epoch=states.append)

    assert states
    for state in states:
        assert state.output_l1 <= state.beta + 1e-9
    assert model.output_l1 <= 2.0 + 1e-9


def test_fit_is_deterministic(friedman):
    cfg = MlpConfig(max_epochs=100, seed=3)
    first = fit_mlp(friedman, cfg)
    second = fit_mlp(friedman, cfg)
    assert first.model_dump_json() == second.model_dump_json()


def test_risk_falls_at_small_learning_rate():
    ds = synthesize(SynthSpec(generator="linear", n=200, seed=8))
    risks = []

    fit_mlp(
        ds,
        MlpConfig(learning_rate=1e-3, max_epochs=400, tolerance=0),
        on_epoch=lambda state: risks.append(state.risk),
    )

    increases = np.diff(risks)
    rising = increases[increases > 0]
    assert len(rising) <= 0.01 * len(risks)
    assert np.all(rising < 1e-9)


def test_linear_target_is_approximated():
    ds = synthesize(SynthSpec(generator="linear", n=500, seed=10))
    plan = split(ds, 0.3, seed=10)
    train, test = ds.subset(plan.train_indices), ds.subset(plan.test_indices)

    model = fit_mlp(train, MlpConfig())

    error = predict_mlp_rows(model, test.features) - test.targets
    assert np.sqrt(np.mean(error**2)) <= 0.5


def test_divergence_is_reported(friedman):
    with pytest.raises(DivergenceError) as info:
        fit_mlp(friedman, MlpConfig(learning_rate=math.inf, max_epochs=5))
    assert info.value.epoch == 1


def test_training_needs_two_rows():
    with pytest.raises(ValueError):
        fit_mlp(make_dataset([[1.0, 2.0]], [1.0]))


def test_model_rejects_broken_constraint():
    model, _ = _network(np.random.default_rng(7), beta=100.0)
    with pytest.raises(pydantic.ValidationError):
        MlpModel.model_validate(
            {**model.model_dump(), "output_bias": 500.0}
        )


def test_model_json_round_trip(friedman):
    model = fit_mlp(friedman, MlpConfig(max_epochs=50))

    restored = MlpModel.model_validate_json(model.model_dump_json())

    np.testing.assert_array_equal(
        predict_mlp_rows(restored, friedman.features),
        predict_mlp_rows(model, friedman.features),
    )
