"""Exceptions raised by the rtann services.

Every error derives from ``RtannError`` and from the builtin it specialises,
so callers may catch either.
"""


class RtannError(Exception):
    pass


class DatasetError(RtannError, ValueError):
    """Bad input data, optionally located by 1-based row and column"""

    def __init__(
        self,
        message: str,
        *,
        row: int | None = None,
        column: int | None = None,
    ):
        if row is not None and column is not None:
            message = f"{message} (row {row}, column {column})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigurationError(RtannError, ValueError):
    pass


class DimensionError(RtannError, ValueError):
    pass


class DomainError(RtannError, ValueError):
    pass


class UnderdeterminedError(RtannError, ValueError):
    pass


class DivergenceError(RtannError, ArithmeticError):
    def __init__(self, epoch: int, risk: float):
        super().__init__(
            f"Training diverged at epoch {epoch} (risk={risk}); "
            "lower the learning rate"
        )
        self.epoch = epoch
        self.risk = risk


class ModelFormatError(RtannError, ValueError):
    pass
