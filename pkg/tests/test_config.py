import pydantic
import pytest

from rtann.config import Config, read_config_file
from rtann.errors import ConfigurationError


def test_defaults():
    settings = Config()
    assert settings.MINSPLIT_FRACTION == 0.10
    assert settings.TEST_FRACTION == 0.3
    assert settings.MODEL_FORMAT_VERSION == 1


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("RTANN_MAX_EPOCHS", "10")
    assert Config().MAX_EPOCHS == 10


def test_environment_is_range_checked(monkeypatch):
    monkeypatch.setenv("RTANN_TEST_FRACTION", "1.5")
    with pytest.raises(pydantic.ValidationError):
        Config()


def test_read_config_file(tmp_path):
    path = tmp_path / "rtann.conf"
    path.write_text(
        "# benchmark defaults\n\nmax-epochs = 500\n seed=7 \nselection=top-2\n"
    )

    assert read_config_file(path) == {
        "max_epochs": "500",
        "seed": "7",
        "selection": "top-2",
    }


def test_read_config_file_quotes_and_comments(tmp_path):
    path = tmp_path / "rtann.conf"
    path.write_text(
        'selection="top-2"  # narrower network\nlearning-rate=0.01 # slow\n'
    )

    assert read_config_file(path) == {
        "selection": "top-2",
        "learning_rate": "0.01",
    }


def test_read_config_file_rejects_bare_key(tmp_path):
    path = tmp_path / "rtann.conf"
    path.write_text("seed=1\nworkers\n")

    with pytest.raises(ConfigurationError, match="got 'workers'"):
        read_config_file(path)


def test_read_config_file_missing(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        read_config_file(tmp_path / "absent.conf")
