from importlib import resources
from pathlib import Path
import logging
import math

import numpy as np
import pandas as pd

from rtann.dataset.generators import GENERATORS, Generator
from rtann.dataset.models import Dataset, SplitPlan, Standardization, SynthSpec
from rtann.errors import ConfigurationError, DatasetError, DomainError

logger = logging.getLogger(__name__)

SAMPLE_TARGET = "Recovery Percentage"


def response_bound_of(targets: np.ndarray) -> float:
    """K: the largest absolute response rounded up to an integer"""

    return float(math.ceil(np.max(np.abs(targets))))


def _parse_numeric(frame: pd.DataFrame) -> np.ndarray:
    """Convert every cell to float, locating the first bad one"""

    raw = frame.apply(lambda column: column.str.strip())
    checked = raw.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = ~np.isfinite(checked)
    if bad.any():
        row, column = np.argwhere(bad)[0]
        cell = raw.iat[row, column]
        problem = "Missing value" if cell == "" else f"Invalid number '{cell}'"
        raise DatasetError(problem, row=int(row) + 1, column=int(column) + 1)
    # to_numeric may be off in the last bit; float() rounds correctly
    return raw.map(float).to_numpy(dtype=float)


def _read_frame(path: Path) -> pd.DataFrame:
    if not path.is_file():
        raise DatasetError(f"Data file not found: {path}")
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DatasetError(f"Data file is empty: {path}")

    frame.columns = [str(name).strip() for name in frame.columns]
    return frame


def read_feature_rows(
    path: str | Path,
    columns: list[str],
    ignore: list[str] | None = None,
) -> np.ndarray:
    """Rows of ``columns`` from a headed CSV, matched by name

    Columns listed in ``ignore`` may be present and are skipped; any other
    unknown or missing column is an error. A header without rows gives an
    empty matrix.
    """

    path = Path(path)
    frame = _read_frame(path)
    present = list(frame.columns)

    missing = [name for name in columns if name not in present]
    if missing:
        raise DatasetError(f"Missing column(s): {', '.join(missing)}")
    extra = [
        name
        for name in present
        if name not in columns and name not in (ignore or [])
    ]
    if extra:
        raise DatasetError(f"Unexpected column(s): {', '.join(extra)}")

    if frame.empty:
        return np.empty((0, len(columns)))
    return _parse_numeric(frame[columns])


def load_csv(
    path: str | Path,
    target_column: str,
    response_bound: float | None = None,
) -> Dataset:
    """Load a headed, comma separated file of decimal numbers

    The target column is moved to the end; the remaining columns keep their
    file order. Row and column numbers in errors are 1-based and count data
    records only.
    """

    path = Path(path)
    frame = _read_frame(path)
    if frame.empty:
        raise DatasetError(f"Data file has a header but no rows: {path}")
    if target_column not in frame.columns:
        raise DatasetError(
            f"Unknown target column '{target_column}', "
            f"available: {', '.join(frame.columns)}"
        )

    values = _parse_numeric(frame)
    target_index = list(frame.columns).index(target_column)
    feature_indices = [
        j for j in range(values.shape[1]) if j != target_index
    ]
    if not feature_indices:
        raise DatasetError("The file holds no feature columns")

    targets = values[:, target_index]
    names = [frame.columns[j] for j in feature_indices]
    bound = (
        response_bound_of(targets)
        if response_bound is None
        else float(response_bound)
    )

    logger.info(
        f"Loaded {path.name}: n={len(targets)}, p={len(names)}, K={bound}"
    )
    return Dataset(
        column_names=[*names, target_column],
        features=values[:, feature_indices],
        targets=targets,
        response_bound=bound,
    )


def write_csv(ds: Dataset, path: str | Path) -> Path:
    """Write features then target; floats keep their shortest exact form"""

    path = Path(path)
    frame = pd.DataFrame(
        np.column_stack([ds.features, ds.targets]), columns=ds.column_names
    )
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path


def load_sample(tissue: int) -> Dataset:
    """The printed sample rows for tissue 1 or tissue 2"""

    if tissue not in (1, 2):
        raise ConfigurationError(f"No sample data for tissue {tissue}")

    resource = resources.files("rtann.dataset").joinpath(
        f"data/tissue{tissue}_sample.csv"
    )
    with resources.as_file(resource) as path:
        return load_csv(path, SAMPLE_TARGET)


def efficiency(inlet_ppm: float, outlet_ppm: float) -> float:
    """Recovery percentage from inlet and outlet parts per million"""

    if not inlet_ppm > 0:
        raise DomainError(f"Inlet PPM must be positive, got {inlet_ppm}")
    if outlet_ppm < 0:
        raise DomainError(f"Outlet PPM must be nonnegative, got {outlet_ppm}")
    return (inlet_ppm - outlet_ppm) * 100 / inlet_ppm


def fit_standardization(values: np.ndarray) -> Standardization:
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 2:
        raise DatasetError("Standardization needs at least two rows")

    constant = np.ptp(values, axis=0) == 0
    scales = np.where(constant, 0.0, values.std(axis=0, ddof=1))
    return Standardization(
        means=values.mean(axis=0), scales=scales, constant=constant
    )


def standardize(ds: Dataset) -> tuple[Dataset, Standardization]:
    """Zero mean, unit sample sd per column; constant columns become zero"""

    stats = fit_standardization(ds.features)
    if stats.constant.any():
        constant = [
            name
            for name, flag in zip(ds.feature_names, stats.constant)
            if flag
        ]
        logger.debug(f"Constant columns mapped to zero: {constant}")
    return ds.with_features(stats.apply(ds.features), ds.feature_names), stats


def _test_size(n: int, test_fraction: float) -> int:
    if not 0 < test_fraction < 1:
        raise ConfigurationError(
            f"Test fraction must lie in (0, 1), got {test_fraction}"
        )
    # The epsilon keeps decimal fractions such as 0.29 * 100 on the
    # intended side of the floor.
    size = math.floor(n * test_fraction + 1e-9)
    if size < 1 or n - size < 1:
        raise DatasetError(
            f"Cannot split {n} rows with test fraction {test_fraction}"
        )
    return size


def split(ds: Dataset, test_fraction: float, seed: int) -> SplitPlan:
    """Seeded holdout split with floor(n * test_fraction) test rows"""

    size = _test_size(ds.n, test_fraction)
    order = np.random.default_rng(seed).permutation(ds.n)
    return SplitPlan(
        train_indices=sorted(order[size:].tolist()),
        test_indices=sorted(order[:size].tolist()),
        seed=seed,
    )


def kfold(ds: Dataset, folds: int, seed: int) -> list[SplitPlan]:
    """Seeded K-fold partition; fold sizes differ by at most one"""

    if folds < 2:
        raise ConfigurationError(f"K-fold needs at least 2 folds, got {folds}")
    if folds > ds.n:
        raise DatasetError(f"Cannot make {folds} folds from {ds.n} rows")

    order = np.random.default_rng(seed).permutation(ds.n)
    plans = []
    for test in np.array_split(order, folds):
        train = np.setdiff1d(order, test)
        plans.append(
            SplitPlan(
                train_indices=train.tolist(),
                test_indices=sorted(test.tolist()),
                seed=seed,
            )
        )
    return plans


def get_generator(name: str) -> Generator:
    try:
        return GENERATORS[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown generator '{name}', "
            f"choose one of: {', '.join(GENERATORS)}"
        )


def synthesize(spec: SynthSpec) -> Dataset:
    """Draw a dataset from a named generator

    Targets are m(x) plus Gaussian noise, clipped to the generator bound.
    """

    generator = get_generator(spec.generator)
    rng = np.random.default_rng(spec.seed)
    inputs = generator.draw_inputs(spec.n, rng)
    noise = rng.normal(0.0, 1.0, size=spec.n) * spec.noise_sd
    targets = np.clip(
        generator.function(inputs) + noise, -generator.bound, generator.bound
    )

    return Dataset(
        column_names=[*generator.feature_names, "y"],
        features=inputs,
        targets=targets,
        response_bound=generator.bound,
    )
