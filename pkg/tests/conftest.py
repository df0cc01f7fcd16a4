import numpy as np
import pytest

from hjflow import GridFunction, GridSpec


@pytest.fixture
def spec_1d():
    return GridSpec(1, 10.0, 256)


@pytest.fixture
def spec_1d_fine():
    return GridSpec(1, 10.0, 1024)


@pytest.fixture
def spec_2d():
    return GridSpec(2, 5.0, 64)


@pytest.fixture
def gaussian_bump(spec_1d):
    return GridFunction.from_callable(spec_1d, lambda x: np.exp(-(x**2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_bump(spec, rng, center_scale=3.0, max_amp=1.0):
    """A random signed Gaussian bump supported well inside the grid."""
    c = rng.uniform(-center_scale, center_scale, size=spec.dim)
    w = rng.uniform(0.5, 2.0)
    amp = rng.uniform(-max_amp, max_amp)
    if spec.dim == 1:
        return GridFunction.from_callable(spec, lambda x: amp * np.exp(-((x - c[0]) ** 2) / w**2))
    return GridFunction.from_callable(
        spec, lambda x, y: amp * np.exp(-(((x - c[0]) ** 2) + (y - c[1]) ** 2) / w**2)
    )
