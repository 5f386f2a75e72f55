import math

import numpy as np
import pytest

from tomolab.kernel import TomographyFrame, frame_from_scaling


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_frame(rng, smin=0.5, smax=2.0) -> TomographyFrame:
    """Random frame through the (s, theta) parametrization."""
    return frame_from_scaling(rng.uniform(smin, smax), rng.uniform(0.0, 2.0 * math.pi))


def gaussian_tomogram_values(x, mean=0.0, sigma=1.0):
    return np.exp(-((x - mean) ** 2) / (2.0 * sigma ** 2)) / (sigma * math.sqrt(2.0 * math.pi))
