from concurrent.futures import ThreadPoolExecutor
import logging

import numpy as np
import pydantic
from pydantic import BaseModel, ConfigDict

from rtann.config import config
from rtann.dataset.models import Dataset, SplitPlan
from rtann.errors import RtannError
from rtann.estimators.models import FitOptions, ModelKind
from rtann.estimators.services import get_estimator
from rtann.metrics.models import ComparisonTable, MetricsReport
from rtann.metrics.services import comparison_table, evaluate

logger = logging.getLogger(__name__)

BENCHMARK_KINDS = [
    ModelKind.ols,
    ModelKind.stepwise,
    ModelKind.pls,
    ModelKind.tree,
    ModelKind.mlp,
    ModelKind.hybrid,
]
MARS_NOTE = "Note: MARS is not part of this comparison."


class ModelScores(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ModelKind
    in_sample: MetricsReport | None = None
    holdout: MetricsReport | None = None
    error: str | None = None


class BenchmarkResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    scores: list[ModelScores]
    protocol: str

    def table(self, which: str) -> ComparisonTable:
        """``which`` is "in_sample" or "holdout" """

        return comparison_table(
            [(s.kind.value, getattr(s, which)) for s in self.scores],
            notes=[MARS_NOTE],
        )


def _score(
    ds: Dataset,
    kind: ModelKind,
    plans: list[SplitPlan],
    options: FitOptions,
) -> ModelScores:
    estimator = get_estimator(kind)
    try:
        if len(plans) == 1:
            plan = plans[0]
            train = ds.subset(plan.train_indices)
            test = ds.subset(plan.test_indices)
            model = estimator.fit(train, options)
            k = estimator.predictor_count(model)
            in_sample = evaluate(
                train.targets,
                estimator.predict_rows(model, train.features),
                k,
            )
            holdout = evaluate(
                test.targets, estimator.predict_rows(model, test.features), k
            )
        else:
            model = estimator.fit(ds, options)
            k = estimator.predictor_count(model)
            in_sample = evaluate(
                ds.targets, estimator.predict_rows(model, ds.features), k
            )
            pooled = np.empty(ds.n)
            for plan in plans:
                fold = estimator.fit(ds.subset(plan.train_indices), options)
                pooled[plan.test_indices] = estimator.predict_rows(
                    fold, ds.features[plan.test_indices]
                )
            holdout = evaluate(ds.targets, pooled, k)
    except (RtannError, pydantic.ValidationError) as e:
        logger.warning(f"{kind.value} failed: {e}")
        return ModelScores(kind=kind, error=str(e))

    logger.info(
        f"{kind.value}: holdout RMSE {holdout.rmse:.4g}, "
        f"in-sample RMSE {in_sample.rmse:.4g}"
    )
    return ModelScores(kind=kind, in_sample=in_sample, holdout=holdout)


def run_benchmark(
    ds: Dataset,
    plans: list[SplitPlan],
    options: FitOptions | None = None,
    workers: int | None = None,
) -> BenchmarkResult:
    """Fit every comparison model under the same split(s) and seed

    One plan is a holdout split: in-sample metrics come from the training
    rows. Several plans are folds: held-out metrics pool the out-of-fold
    predictions and in-sample metrics come from a fit on all rows. A model
    that fails gets an error entry instead of metrics.
    """

    options = options or FitOptions()
    with ThreadPoolExecutor(max_workers=workers or config.WORKERS) as pool:
        scores = list(
            pool.map(
                lambda kind: _score(ds, kind, plans, options), BENCHMARK_KINDS
            )
        )
    protocol = (
        f"holdout of {len(plans[0].test_indices)} rows"
        if len(plans) == 1
        else f"{len(plans)}-fold cross-validation"
    )
    return BenchmarkResult(scores=scores, protocol=protocol)
