"""Risk-versus-sample-size experiments on synthetic generators.

Each (n, repeat) cell draws its own training sample, fits one model and
measures the mean squared distance to the noiseless regression function
on a fresh sample ``holdout_factor`` times larger. Cells are independent
and run on a thread pool; results are ordered by (n, repeat).
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable
import logging

import numpy as np

from rtann.config import config
from rtann.consistency.models import SweepRecord, SweepResult, SweepSpec
from rtann.consistency.models import Verdict
from rtann.dataset.models import Dataset, SynthSpec
from rtann.dataset.services import get_generator, synthesize
from rtann.network.models import MlpConfig
from rtann.network.services import fit_mlp, hidden_count_auto
from rtann.network.services import predict_mlp_rows
from rtann.tree.models import TreeConfig
from rtann.tree.services import fit_tree, leaf_schedule, predict_tree_rows

logger = logging.getLogger(__name__)

# Fits one training set, returns (capacity, budget, training predictions,
# a predictor for new rows).
CellFit = Callable[
    [Dataset, int],
    tuple[int, int | None, np.ndarray, Callable[[np.ndarray], np.ndarray]],
]


def _cell_seeds(spec: SweepSpec, n: int, repeat: int) -> tuple[int, int]:
    train, holdout = np.random.SeedSequence(
        [spec.seed, n, repeat]
    ).generate_state(2)
    return int(train), int(holdout)


def _run_cell(
    spec: SweepSpec, n: int, repeat: int, fit: CellFit
) -> SweepRecord:
    train_seed, holdout_seed = _cell_seeds(spec, n, repeat)
    generator = get_generator(spec.generator)
    ds = synthesize(
        SynthSpec(
            generator=spec.generator,
            n=n,
            noise_sd=spec.noise_sd,
            seed=train_seed,
        )
    )
    capacity, budget, fitted, predict = fit(ds, train_seed)

    rng = np.random.default_rng(holdout_seed)
    inputs = generator.draw_inputs(spec.holdout_factor * n, rng)
    truth = generator.function(inputs)
    record = SweepRecord(
        n=n,
        repeat=repeat,
        capacity=capacity,
        budget=budget,
        train_risk=float(np.mean((fitted - ds.targets) ** 2)),
        holdout_risk=float(np.mean((predict(inputs) - truth) ** 2)),
    )
    logger.debug(
        f"Cell n={n} repeat={repeat}: capacity {capacity}, "
        f"holdout risk {record.holdout_risk:.6g}"
    )
    return record


def _sweep(
    spec: SweepSpec,
    kind: str,
    fit: CellFit,
    workers: int | None = None,
) -> SweepResult:
    cells = [(n, r) for n in spec.sizes for r in range(spec.repeats)]
    with ThreadPoolExecutor(max_workers=workers or config.WORKERS) as pool:
        records = list(
            pool.map(lambda cell: _run_cell(spec, *cell, fit), cells)
        )

    result = SweepResult(kind=kind, spec=spec, records=records)
    for n, median in result.median_holdout().items():
        logger.info(f"{kind} sweep n={n}: median holdout risk {median:.6g}")
    return result


def run_tree_sweep(
    spec: SweepSpec, workers: int | None = None
) -> SweepResult:
    """Trees grown best-first to the leaf budget of ``spec.schedule``"""

    def fit(ds: Dataset, seed: int):
        budget = leaf_schedule(ds.n, spec.schedule)
        model = fit_tree(
            ds,
            TreeConfig(
                minsplit_fraction=spec.minsplit_fraction,
                max_leaves=budget,
                seed=seed,
            ),
        )
        return (
            model.leaf_count,
            budget,
            predict_tree_rows(model, ds.features),
            lambda rows: predict_tree_rows(model, rows),
        )

    return _sweep(spec, "tree", fit, workers)


def run_mlp_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Networks with k = hidden_count_auto(n, p) and beta on auto"""

    def fit(ds: Dataset, seed: int):
        k = hidden_count_auto(ds.n, ds.p)
        model = fit_mlp(
            ds,
            MlpConfig(hidden_count=k, max_epochs=spec.max_epochs, seed=seed),
        )
        return (
            k,
            None,
            predict_mlp_rows(model, ds.features),
            lambda rows: predict_mlp_rows(model, rows),
        )

    return _sweep(spec, "mlp", fit, workers)


def trend_verdict(result: SweepResult) -> Verdict:
    """Whether the median holdout risk falls strictly with every size"""

    medians = list(result.median_holdout().values())
    if len(medians) < 2:
        return "insufficient points"
    if all(b < a for a, b in zip(medians, medians[1:])):
        return "decreasing"
    return "not decreasing"
