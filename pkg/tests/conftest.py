import numpy as np
import pytest

from magnitude import build_kernel, magnitude, solve_weighting
from magnitude.shapes import gen_square_grid


def solve_mag(cloud, t, **kwargs):
    """One-shot magnitude of a cloud at scale t."""
    weighting = solve_weighting(build_kernel(cloud, t), **kwargs)
    return magnitude(weighting), weighting


@pytest.fixture(scope="session")
def square101():
    # 101 x 101 grid: the largest cloud the suite solves, shared across
    # the valuation-fit, bulk-weight and edge-profile tests.
    return gen_square_grid(101)


@pytest.fixture(scope="session")
def square101_t10(square101):
    mag, weighting = solve_mag(square101, 10.0)
    return mag, weighting


@pytest.fixture(scope="session")
def square101_mags(square101, square101_t10):
    mags = {}
    for t in (1.0, 2.0, 5.0):
        mags[t], _ = solve_mag(square101, t)
    mags[10.0] = square101_t10[0]
    return mags


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
