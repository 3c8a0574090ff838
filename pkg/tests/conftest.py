import pytest

from rtann.dataset.models import Dataset, SynthSpec
from rtann.dataset.services import synthesize
from tests.helpers import make_dataset


@pytest.fixture
def step_data() -> Dataset:
    """x = 1..4, y = 0, 0, 10, 10"""
    return make_dataset([1, 2, 3, 4], [0, 0, 10, 10])


@pytest.fixture
def axis_steps() -> Dataset:
    return synthesize(SynthSpec(generator="axis-steps", n=200, seed=1))


@pytest.fixture
def noisy_axis_steps() -> Dataset:
    return synthesize(
        SynthSpec(generator="axis-steps", n=200, noise_sd=0.5, seed=2)
    )


@pytest.fixture
def linear_data() -> Dataset:
    return synthesize(SynthSpec(generator="linear", n=100, seed=3))


@pytest.fixture
def friedman() -> Dataset:
    return synthesize(
        SynthSpec(generator="friedman-like", n=120, noise_sd=1.0, seed=4)
    )
