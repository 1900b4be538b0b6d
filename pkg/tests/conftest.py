import numpy as np
import pytest

from helicore import GridSpec, random_exact_field


@pytest.fixture(scope="session")
def grid16():
    return GridSpec(16)


@pytest.fixture(scope="session")
def grid32():
    return GridSpec(32)


@pytest.fixture(scope="session")
def rand_pair(grid32):
    return (
        random_exact_field(grid32, 7, 2),
        random_exact_field(grid32, 8, 2),
    )


@pytest.fixture(scope="session")
def rand_triple(grid32):
    return (
        random_exact_field(grid32, 7, 2),
        random_exact_field(grid32, 8, 2),
        random_exact_field(grid32, 9, 2),
    )


def coeff_rel_error(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-30)
    return float(np.max(np.abs(a - b)) / scale)
