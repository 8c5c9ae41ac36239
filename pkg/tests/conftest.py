import math

import numpy as np
import pytest

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def sq4() -> np.ndarray:
    """Distances between the corners of a unit square, in cyclic order."""
    s = SQRT2
    return np.array([[0, 1, s, 1], [1, 0, 1, s], [s, 1, 0, 1], [1, s, 1, 0]], dtype=float)


@pytest.fixture
def hex_matrix() -> np.ndarray:
    """Three landmarks and three witnesses related in a hexagonal pattern."""
    return np.array([[0, 1, 9], [9, 0, 1], [1, 9, 0]], dtype=float)
