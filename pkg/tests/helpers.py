import numpy as np

from rtann.dataset.models import Dataset


def make_dataset(features, targets, bound=None, names=None) -> Dataset:
    """Dataset from plain lists; K defaults to ceil(max |y|)"""

    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, np.newaxis]
    targets = np.asarray(targets, dtype=float)
    if bound is None:
        bound = float(np.ceil(np.max(np.abs(targets))))
    names = names or [f"x{j + 1}" for j in range(features.shape[1])]
    return Dataset(
        column_names=[*names, "y"],
        features=features,
        targets=targets,
        response_bound=bound,
    )
