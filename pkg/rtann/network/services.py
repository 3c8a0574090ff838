from typing import Callable
import logging
import math

import numpy as np
from scipy.special import expit

from rtann.dataset.models import Dataset
from rtann.dataset.services import fit_standardization
from rtann.errors import ConfigurationError, DatasetError, DimensionError
from rtann.errors import DivergenceError
from rtann.network.models import EpochState, MlpConfig, MlpGradient, MlpModel
from rtann.types import clamp

logger = logging.getLogger(__name__)


def sigmoid(x):
    """Logistic squasher 1 / (1 + exp(-x)), overflow free"""

    value = expit(x)
    return float(value) if np.ndim(value) == 0 else value


def hidden_count_auto(n: int, d_m: int) -> int:
    """k = sqrt(n / (d_m ln n)), rounded half away from zero, at least 1"""

    if n < 2:
        raise ConfigurationError(f"Hidden width needs n >= 2, got {n}")
    if d_m < 1:
        raise ConfigurationError(f"Input dimension must be >= 1, got {d_m}")
    return max(1, math.floor(math.sqrt(n / (d_m * math.log(n))) + 0.5))


def beta_auto(n: int, response_bound: float) -> float:
    """beta_n = 2 K ln n: grows without bound, slowly enough for consistency"""

    if n < 2:
        raise ConfigurationError(f"beta needs n >= 2, got {n}")
    return 2.0 * max(response_bound, 1.0) * math.log(n)


def _flat_variance(response_bound: float) -> float:
    """Response variances at or below this count as flat"""

    return 1e-6 * max(response_bound, 1.0) ** 2


def _project(
    weights: np.ndarray, bias: float, beta: float
) -> tuple[np.ndarray, float]:
    """Rescale (c, c0) onto |c0| + sum |c_i| <= beta"""

    norm = abs(bias) + np.sum(np.abs(weights))
    if norm > beta:
        factor = beta / norm
        return weights * factor, bias * factor
    return weights, bias


def _risk_and_gradient(
    hidden_weights: np.ndarray,
    hidden_biases: np.ndarray,
    output_weights: np.ndarray,
    output_bias: float,
    inputs: np.ndarray,
    targets: np.ndarray,
) -> tuple[float, tuple]:
    n = len(targets)
    hidden = expit(inputs @ hidden_weights.T + hidden_biases)
    residual = hidden @ output_weights + output_bias - targets
    risk = float(np.dot(residual, residual) / n)

    scaled = (2.0 / n) * residual
    slope = hidden * (1.0 - hidden) * np.outer(scaled, output_weights)
    gradient = (
        slope.T @ inputs,
        slope.sum(axis=0),
        hidden.T @ scaled,
        float(scaled.sum()),
    )
    return risk, gradient


def _standardized_inputs(model: MlpModel, features) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.ndim != 2:
        raise DimensionError(f"Expected a row matrix, got {features.shape}")
    if features.shape[1] != model.input_dim:
        raise DimensionError(
            f"Network expects {model.input_dim} inputs, "
            f"got {features.shape[1]}"
        )
    return model.standardization.apply(features)


def risk_gradient(model: MlpModel, ds: Dataset) -> MlpGradient:
    """Exact gradient of the unclamped empirical L2 risk on ``ds``"""

    inputs = _standardized_inputs(model, ds.features)
    _, gradient = _risk_and_gradient(
        model.hidden_weights,
        model.hidden_biases,
        model.output_weights,
        model.output_bias,
        inputs,
        ds.targets,
    )
    return MlpGradient(
        hidden_weights=gradient[0],
        hidden_biases=gradient[1],
        output_weights=gradient[2],
        output_bias=gradient[3],
    )


def empirical_risk(model: MlpModel, ds: Dataset) -> float:
    """(1/n) sum (f(z_j) - y_j)^2 of the unclamped network"""

    inputs = _standardized_inputs(model, ds.features)
    risk, _ = _risk_and_gradient(
        model.hidden_weights,
        model.hidden_biases,
        model.output_weights,
        model.output_bias,
        inputs,
        ds.targets,
    )
    return risk


def init_mlp(ds: Dataset, cfg: MlpConfig | None = None) -> MlpModel:
    """Seeded starting point of ``fit_mlp``

    Hidden weights and biases are uniform on [-1, 1] / sqrt(d_m); output
    weights uniform on +-beta / (4 (k + 1)); the output bias starts at the
    response mean. A response without spread starts with zero output
    weights and c0 equal to that constant; so does a response whose variance
    is below 1e-6 K^2, with c0 at its mean.
    """

    cfg = cfg or MlpConfig()
    if ds.n < 2:
        raise DatasetError(f"Network training needs n >= 2, got {ds.n}")

    d_m = ds.p
    k = (
        hidden_count_auto(ds.n, d_m)
        if cfg.hidden_count == "auto"
        else cfg.hidden_count
    )
    beta = (
        beta_auto(ds.n, ds.response_bound) if cfg.beta == "auto" else cfg.beta
    )

    rng = np.random.default_rng(cfg.seed)
    limit = 1.0 / math.sqrt(d_m)
    hidden_weights = rng.uniform(-limit, limit, size=(k, d_m))
    hidden_biases = rng.uniform(-limit, limit, size=k)
    spread = beta / (4 * (k + 1))
    output_weights = rng.uniform(-spread, spread, size=k)

    output_bias = float(np.mean(ds.targets))
    if np.var(ds.targets, ddof=1) <= _flat_variance(ds.response_bound):
        output_weights = np.zeros(k)
    if np.ptp(ds.targets) == 0:
        output_bias = float(ds.targets[0])
    output_weights, output_bias = _project(output_weights, output_bias, beta)

    return MlpModel(
        input_dim=d_m,
        hidden_weights=hidden_weights,
        hidden_biases=hidden_biases,
        output_weights=output_weights,
        output_bias=output_bias,
        beta=beta,
        standardization=fit_standardization(ds.features),
        response_bound=ds.response_bound,
    )


def fit_mlp(
    ds: Dataset,
    cfg: MlpConfig | None = None,
    on_epoch: Callable[[EpochState], None] | None = None,
) -> MlpModel:
    """Minimise the empirical L2 risk by full-batch gradient descent

    After every step the output weights are projected back onto
    |c0| + sum |c_i| <= beta. Hidden-layer steps are divided by the response
    variance, floored at 1e-6 K^2. Training stops after ``max_epochs`` or
    once the risk improved by less than ``tolerance`` over the last
    ``patience`` epochs.
    """

    cfg = cfg or MlpConfig()
    start = init_mlp(ds, cfg)
    inputs = start.standardization.apply(ds.features)
    targets = ds.targets
    beta = start.beta

    variance = max(
        float(np.var(targets, ddof=1)), _flat_variance(ds.response_bound)
    )
    hidden_rate = cfg.learning_rate / variance
    output_rate = cfg.learning_rate

    hidden_weights = start.hidden_weights.copy()
    hidden_biases = start.hidden_biases.copy()
    output_weights = start.output_weights.copy()
    output_bias = start.output_bias

    risk, gradient = _risk_and_gradient(
        hidden_weights,
        hidden_biases,
        output_weights,
        output_bias,
        inputs,
        targets,
    )
    history = [risk]
    epoch = 0

    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, cfg.max_epochs + 1):
            hidden_weights = hidden_weights - hidden_rate * gradient[0]
            hidden_biases = hidden_biases - hidden_rate * gradient[1]
            output_weights = output_weights - output_rate * gradient[2]
            output_bias = output_bias - output_rate * gradient[3]
            output_weights, output_bias = _project(
                output_weights, output_bias, beta
            )

            risk, gradient = _risk_and_gradient(
                hidden_weights,
                hidden_biases,
                output_weights,
                output_bias,
                inputs,
                targets,
            )
            if not (
                math.isfinite(risk)
                and np.all(np.isfinite(hidden_weights))
                and np.all(np.isfinite(hidden_biases))
            ):
                raise DivergenceError(epoch, risk)
            history.append(risk)

            if on_epoch is not None:
                on_epoch(
                    EpochState(
                        epoch=epoch,
                        risk=risk,
                        output_l1=abs(output_bias)
                        + float(np.sum(np.abs(output_weights))),
                        beta=beta,
                    )
                )
            if epoch % 500 == 0:
                logger.debug(f"Epoch {epoch}: training risk {risk:.6g}")
            if (
                epoch >= cfg.patience
                and history[epoch - cfg.patience] - risk < cfg.tolerance
            ):
                break

    logger.info(
        f"Fitted network: k={start.hidden_count}, d_m={start.input_dim}, "
        f"beta={beta:.4g}, risk={risk:.6g} after {epoch} epochs"
    )
    return MlpModel(
        input_dim=start.input_dim,
        hidden_weights=hidden_weights,
        hidden_biases=hidden_biases,
        output_weights=output_weights,
        output_bias=float(output_bias),
        beta=beta,
        standardization=start.standardization,
        response_bound=start.response_bound,
        training_risk=risk,
        epochs_run=epoch,
    )


def predict_mlp_rows(model: MlpModel, rows) -> np.ndarray:
    inputs = _standardized_inputs(model, rows)
    hidden = expit(inputs @ model.hidden_weights.T + model.hidden_biases)
    output = hidden @ model.output_weights + model.output_bias
    return clamp(output, model.response_bound)


def predict_mlp(model: MlpModel, x_raw) -> float:
    """Network output for one raw input vector, clamped to [-K, K]"""

    x_raw = np.asarray(x_raw, dtype=float)
    if x_raw.ndim != 1:
        raise DimensionError(f"Expected one input vector, got {x_raw.shape}")
    return float(predict_mlp_rows(model, x_raw[np.newaxis, :])[0])
