import numpy as np
import pytest

from hilbertlevy.families import HNIGParams, make_hnig
from hilbertlevy.space import CovOperator, TruncatedVector


SEED = 13


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def desk_hnig_params():
    """s = 1, c = 1, b = 0.5 e_1 and Q = diag(1, 0.5) on a single two-dimensional component."""
    q = CovOperator.from_eigenvalues([[1.0, 0.5]])
    return HNIGParams(1.0, 1.0, TruncatedVector.from_components([[0.5, 0.0]]), q)


@pytest.fixture
def desk_hnig(desk_hnig_params):
    return make_hnig(desk_hnig_params)
