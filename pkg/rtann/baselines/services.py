"""Linear comparators: least squares, forward stepwise AIC and PLS1.

All three fit on the raw feature scale internally centred (PLS also
scaled), and report coefficients for the raw features.
"""

from dataclasses import dataclass
from typing import Literal
import logging
import math

import numpy as np
from scipy import linalg

from rtann.baselines.models import LinearModel
from rtann.config import config
from rtann.dataset.models import Dataset
from rtann.errors import ConfigurationError, DimensionError
from rtann.errors import UnderdeterminedError
from rtann.types import clamp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Fit:
    coefficients: np.ndarray
    intercept: float
    dropped: list[int]
    sse: float


def _least_squares(features: np.ndarray, targets: np.ndarray) -> _Fit:
    """Centred least squares through a column-pivoted QR

    Columns whose pivot falls below the rank tolerance get a zero
    coefficient.
    """

    n, q = features.shape
    x_mean = features.mean(axis=0)
    y_mean = float(targets.mean())
    centred = features - x_mean
    residual_target = targets - y_mean
    coefficients = np.zeros(q)

    rank = 0
    permutation = np.arange(q)
    if q:
        factor_q, factor_r, permutation = linalg.qr(
            centred, mode="economic", pivoting=True
        )
        diagonal = np.abs(np.diag(factor_r))
        if diagonal.size and diagonal[0] > 0:
            tolerance = max(n, q) * np.finfo(float).eps * diagonal[0]
            rank = int(np.sum(diagonal > tolerance))
        if rank:
            solved = linalg.solve_triangular(
                factor_r[:rank, :rank], factor_q[:, :rank].T @ residual_target
            )
            coefficients[permutation[:rank]] = solved

    residual = residual_target - centred @ coefficients
    return _Fit(
        coefficients=coefficients,
        intercept=y_mean - float(x_mean @ coefficients),
        dropped=sorted(permutation[rank:].tolist()),
        sse=float(residual @ residual),
    )


def fit_ols(ds: Dataset) -> LinearModel:
    """Ordinary least squares on every feature"""

    if ds.n <= ds.p:
        raise UnderdeterminedError(
            f"Least squares needs n >= p + 1, got n={ds.n}, p={ds.p}"
        )

    fit = _least_squares(ds.features, ds.targets)
    if fit.dropped:
        names = [ds.feature_names[j] for j in fit.dropped]
        logger.warning(f"Rank-deficient design; zeroing columns {names}")
    return LinearModel(
        method="ols",
        coefficients=fit.coefficients,
        intercept=fit.intercept,
        used_features=list(range(ds.p)),
        dropped=fit.dropped,
        response_bound=ds.response_bound,
    )


def _sse_floor(targets: np.ndarray) -> float:
    total = float(np.sum((targets - targets.mean()) ** 2))
    return 1e-12 * total if total > 0 else np.finfo(float).tiny


def _aic(sse: float, n: int, q: int, floor: float) -> float:
    return n * math.log(max(sse, floor) / n) + 2 * (q + 1)


def aic(ds: Dataset, used: list[int]) -> float:
    """n ln(SSE / n) + 2 (q + 1) of the least-squares fit on ``used``"""

    fit = _least_squares(ds.features[:, used], ds.targets)
    return _aic(fit.sse, ds.n, len(used), _sse_floor(ds.targets))


def fit_stepwise(
    ds: Dataset, criterion: Literal["aic"] = "aic"
) -> LinearModel:
    """Forward selection by AIC from the intercept-only model

    Each step adds the feature giving the lowest AIC (lowest index on
    ties) and stops as soon as no addition lowers it.
    """

    if criterion != "aic":
        raise ConfigurationError(f"Unknown stepwise criterion '{criterion}'")
    if ds.n < 3:
        raise UnderdeterminedError(f"Stepwise needs n >= 3, got {ds.n}")

    floor = _sse_floor(ds.targets)
    used: list[int] = []
    current = _aic(
        float(np.sum((ds.targets - ds.targets.mean()) ** 2)), ds.n, 0, floor
    )

    # a model with q predictors needs n >= q + 2 to leave a residual
    while len(used) + 1 <= ds.n - 2:
        best_feature, best_aic = None, current
        for j in range(ds.p):
            if j in used:
                continue
            fit = _least_squares(ds.features[:, [*used, j]], ds.targets)
            candidate = _aic(fit.sse, ds.n, len(used) + 1, floor)
            if candidate < best_aic:
                best_feature, best_aic = j, candidate
        if best_feature is None:
            break
        used.append(best_feature)
        current = best_aic
        logger.debug(
            f"Stepwise added {ds.feature_names[best_feature]}, "
            f"AIC {current:.6g}"
        )

    fit = _least_squares(ds.features[:, used], ds.targets)
    coefficients = np.zeros(ds.p)
    coefficients[used] = fit.coefficients
    logger.info(
        f"Stepwise selected {[ds.feature_names[j] for j in used]} "
        f"(AIC {current:.6g})"
    )
    return LinearModel(
        method="stepwise",
        coefficients=coefficients,
        intercept=fit.intercept,
        used_features=used,
        dropped=[used[j] for j in fit.dropped],
        response_bound=ds.response_bound,
        criterion=current,
    )


def fit_pls(ds: Dataset, n_components: int | None = None) -> LinearModel:
    """PLS1 by NIPALS on standardized features and centred response

    With a single response each component needs no inner iteration:
    w is X'y normalised, t = Xw, then X and y are deflated by t.
    Extraction stops early when X'y vanishes.
    """

    if n_components is None:
        n_components = min(config.PLS_COMPONENTS, ds.p)
    if not 1 <= n_components <= min(ds.n - 1, ds.p):
        raise ConfigurationError(
            f"PLS components must lie in [1, {min(ds.n - 1, ds.p)}], "
            f"got {n_components}"
        )

    x_mean = ds.features.mean(axis=0)
    x_scale = ds.features.std(axis=0, ddof=1)
    x_scale = np.where(x_scale > 0, x_scale, 1.0)
    y_mean = float(ds.targets.mean())
    x = (ds.features - x_mean) / x_scale
    y = ds.targets - y_mean
    scale = float(np.linalg.norm(x) * np.linalg.norm(y))
    threshold = 1e-12 * max(1.0, scale)

    weights, loadings, scores_y = [], [], []
    for component in range(n_components):
        w = x.T @ y
        norm = np.linalg.norm(w)
        if norm <= threshold:
            logger.warning(
                f"PLS stopped after {component} of {n_components} "
                "components: no covariance left"
            )
            break
        w = w / norm
        t = x @ w
        tt = t @ t
        loading = x.T @ t / tt
        q = (y @ t) / tt
        x = x - np.outer(t, loading)
        y = y - q * t
        weights.append(w)
        loadings.append(loading)
        scores_y.append(q)

    extracted = len(weights)
    if extracted:
        w_matrix = np.column_stack(weights)
        p_matrix = np.column_stack(loadings)
        scaled = w_matrix @ np.linalg.solve(
            p_matrix.T @ w_matrix, np.array(scores_y)
        )
    else:
        w_matrix = np.zeros((ds.p, 0))
        scaled = np.zeros(ds.p)

    coefficients = scaled / x_scale
    logger.info(f"Fitted PLS with {extracted} components")
    return LinearModel(
        method="pls",
        coefficients=coefficients,
        intercept=y_mean - float(x_mean @ coefficients),
        used_features=list(range(ds.p)),
        components=extracted,
        weights=w_matrix,
        response_bound=ds.response_bound,
    )


def predict_linear_rows(model: LinearModel, rows) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != model.n_features:
        raise DimensionError(
            f"Linear model expects rows of {model.n_features} features, "
            f"got shape {rows.shape}"
        )
    output = rows @ model.coefficients + model.intercept
    return clamp(output, model.response_bound)


def predict_linear(model: LinearModel, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"Expected one feature vector, got {x.shape}")
    return float(predict_linear_rows(model, x[np.newaxis, :])[0])
