import io

import numpy as np
import pandas as pd

from rtann.errors import DatasetError, DimensionError
from rtann.metrics.models import ComparisonTable, MetricsReport

CSV_COLUMNS = ["model", "mae", "rmse", "mape", "r2", "adj_r2"]
TEXT_COLUMNS = ["Model", "MAE", "RMSE", "MAPE", "R²", "Adj(R²)"]
UNDEFINED = "n/a"
FAILED = "failed"


def adjusted_r2(r2_percent: float, n: int, k: int) -> float | None:
    """100 (1 - (1 - R²) (n - 1) / (n - k - 1)), undefined when n <= k + 1"""

    if n <= k + 1:
        return None
    unexplained = 1 - r2_percent / 100
    return 100 * (1 - unexplained * (n - 1) / (n - k - 1))


def evaluate(y, yhat, k: int = 0) -> MetricsReport:
    """The five accuracy measures of ``yhat`` against ``y``

    ``k`` is the predictor count used by the adjusted R squared.
    """

    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.ndim != 1 or y.shape != yhat.shape:
        raise DimensionError(
            f"Observed {y.shape} and predicted {yhat.shape} differ in shape"
        )
    n = len(y)
    if n < 2:
        raise DatasetError(f"Metrics need at least two values, got {n}")
    if k < 0:
        raise DatasetError(f"Predictor count must be nonnegative, got {k}")

    error = y - yhat
    sse = float(np.sum(error**2))
    undefined = {}

    mape = None
    if np.any(y == 0):
        undefined["mape"] = "observed values include zero"
    else:
        mape = float(100 * np.mean(np.abs(error) / np.abs(y)))

    r2 = adj_r2 = None
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0:
        undefined["r2"] = "observed values are constant"
        undefined["adj_r2"] = "R squared is undefined"
    else:
        r2 = 100 * (1 - sse / sst)
        adj_r2 = adjusted_r2(r2, n, k)
        if adj_r2 is None:
            undefined["adj_r2"] = f"needs n > k + 1 (n={n}, k={k})"

    return MetricsReport(
        mae=float(np.mean(np.abs(error))),
        rmse=float(np.sqrt(sse / n)),
        mape_percent=mape,
        r2_percent=r2,
        adj_r2_percent=adj_r2,
        n=n,
        k=k,
        undefined=undefined,
    )


def _cells(report: MetricsReport | None) -> list[str]:
    if report is None:
        return [FAILED] * 5
    values = (
        report.mae,
        report.rmse,
        report.mape_percent,
        report.r2_percent,
        report.adj_r2_percent,
    )
    return [UNDEFINED if v is None else f"{v:.2f}" for v in values]


def comparison_table(
    rows: list[tuple[str, MetricsReport | None]],
    notes: list[str] | None = None,
) -> ComparisonTable:
    """Side-by-side metrics, as fixed-width text and as CSV

    Rows keep the given order; a ``None`` report renders as a failed row.
    ``notes`` are appended below the text table only.
    """

    if not rows:
        raise DatasetError("A comparison table needs at least one row")

    body = [[name, *_cells(report)] for name, report in rows]

    buffer = io.StringIO()
    pd.DataFrame(body, columns=CSV_COLUMNS).to_csv(
        buffer, index=False, lineterminator="\n"
    )

    widths = [
        max(len(line[j]) for line in [TEXT_COLUMNS, *body])
        for j in range(len(TEXT_COLUMNS))
    ]
    lines = [
        "  ".join(
            cell.ljust(width) if j == 0 else cell.rjust(width)
            for j, (cell, width) in enumerate(zip(line, widths))
        ).rstrip()
        for line in [TEXT_COLUMNS, *body]
    ]
    lines.extend(notes or [])
    return ComparisonTable(text="\n".join(lines) + "\n", csv=buffer.getvalue())
