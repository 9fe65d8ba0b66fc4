from typing import Callable

import numpy as np
import pytest

from rrde.roughpath import GridPath
from rrde.solver import VectorField


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line(
        "markers",
        "slow: full-size acceptance battery; deselect with -m 'not slow'",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def time_driver() -> Callable[[int], GridPath]:
    """x_t = t on a uniform grid of n intervals over [0, 1]"""

    def build(n: int) -> GridPath:
        times = np.linspace(0.0, 1.0, n + 1)
        return GridPath(times, times)

    return build


@pytest.fixture
def exponential_field() -> VectorField:
    return VectorField(1, lambda y: y, lambda y: 1.0, name="exponential")


@pytest.fixture
def bounded_field() -> VectorField:
    return VectorField(
        1,
        lambda y: 1.0 / (1.0 + y * y),
        lambda y: -2.0 * y / (1.0 + y * y) ** 2,
        name="bounded",
    )
