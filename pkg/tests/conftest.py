import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_matrix(rng, d, scale=1.0):
    return scale * rng.standard_normal((d, d))
