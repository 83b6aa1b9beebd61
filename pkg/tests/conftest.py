import math

import numpy as np
import pytest

from ripramsey import ColumnMatrix


@pytest.fixture(scope="session")
def star_matrix() -> ColumnMatrix:
    """8 basis vectors plus the balanced unit vector: 9 columns in R^8.

    Every 7-column Gram submatrix has eigenvalues within [1 - sqrt(6/8),
    1 + sqrt(6/8)], so the exhaustive delta at s=7 is sqrt(0.75) < 1 and
    the matrix genuinely satisfies the isometry hypothesis the clique
    bounds need (random matrices at this size essentially never do).
    """
    return ColumnMatrix(np.hstack([np.eye(8), np.ones((8, 1)) / math.sqrt(8)]))
