from dotenv import dotenv_values
from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache
from pathlib import Path

from rtann.errors import ConfigurationError


class Config(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="RTANN_")

    DEFAULT_SEED: int = 42

    # Model files
    MODEL_FORMAT_VERSION: int = 1

    # Evaluation protocol
    TEST_FRACTION: float = 0.3

    # Regression tree settings
    MINSPLIT_FRACTION: float = 0.10  # 10% of the training size

    # Network training settings
    LEARNING_RATE: float = 0.05
    MAX_EPOCHS: int = 3000
    TOLERANCE: float = 1e-9
    PATIENCE: int = 25  # Epoch window for the improvement check

    # Baselines
    PLS_COMPONENTS: int = 2

    # Consistency sweeps
    SWEEP_REPEATS: int = 5
    HOLDOUT_FACTOR: int = 10  # Fresh evaluation sample is 10 * n

    # Thread pool for sweeps and benchmarks
    WORKERS: int = 4

    LOG_FORMAT: str = "%(asctime)s - %(levelname)s - %(message)s"

    @model_validator(mode="after")
    def check_ranges(self) -> "Config":
        """Reject settings that no command could run with"""
        if not 0 < self.TEST_FRACTION < 1:
            raise ValueError("TEST_FRACTION must lie in (0, 1)")
        if not 0 < self.MINSPLIT_FRACTION <= 1:
            raise ValueError("MINSPLIT_FRACTION must lie in (0, 1]")
        if self.WORKERS < 1:
            raise ValueError("WORKERS must be at least 1")
        return self


@lru_cache()
def get_config():
    return Config()


config = get_config()


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key=value`` settings for the command options

    The file uses the dotenv format: ``#`` comments, optional quotes.
    ``-`` and ``_`` are interchangeable in keys.
    """

    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")

    values = {}
    for key, value in dotenv_values(path, encoding="utf-8").items():
        if value is None:
            raise ConfigurationError(
                f"{path}: expected key=value, got '{key}'"
            )
        values[key.replace("-", "_")] = value
    return values
