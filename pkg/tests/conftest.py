import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_poly(rng, degree=3, n_terms=8):
    """Random complex polynomial with total degree <= ``degree`` and a nonzero constant."""
    keys = [(k, l, m) for k in range(degree + 1) for l in range(degree + 1) for m in range(degree + 1)
            if 0 < k + l + m <= degree]
    chosen = rng.choice(len(keys), size=n_terms, replace=False)
    poly = {keys[i]: complex(rng.normal(), rng.normal()) for i in chosen}
    poly[(0, 0, 0)] = complex(rng.normal(), rng.normal())
    return poly
