import math

import numpy as np
import pytest

from ohstark.core_model import FieldPoint, MolecularParameters


@pytest.fixture
def oh():
    return MolecularParameters.oh()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, n):
    """Field points drawn from B in [0, 2] T, E in [0, 10] kV/cm, theta in [0, pi]."""
    return [
        FieldPoint(rng.uniform(0, 2), rng.uniform(0, 1e6), rng.uniform(0, math.pi))
        for _ in range(n)
    ]
