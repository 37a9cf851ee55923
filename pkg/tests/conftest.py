import numpy as np
import pytest

from src.cli.model_file import parse_model
from src.model.builders import NK_CALIBRATION, build_nk
from src.model.structures import ModelCM
from src.utils.config import NK_MODEL_FILE


@pytest.fixture(scope="session")
def nk_model() -> ModelCM:
    """NK model built from the structural calibration (full precision)."""
    return build_nk(NK_CALIBRATION)


@pytest.fixture(scope="session")
def nk_file():
    return parse_model(NK_MODEL_FILE)


def make_random_model(rng: np.random.Generator, n: int = None, m: int = None, rank: int = None) -> ModelCM:
    """Well-posed model: Ahat with singular values in [0.8, 1.25] on its range, small A.

    With rank < n, Ahat = U diag(s, 0) U^T so that rank Ahat = rank Ahat^2.
    """
    n = n or int(rng.integers(1, 5))
    m = m or int(rng.integers(1, 5))
    rank = n if rank is None else rank
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = np.zeros(n)
    s[:rank] = rng.uniform(0.8, 1.25, rank)
    Ahat = U @ np.diag(s) @ (V.T if rank == n else U.T)
    A = 0.1 * rng.standard_normal((n, n))
    B = rng.standard_normal((n, m))
    R = np.diag(rng.uniform(-0.6, 0.6, m))
    return ModelCM(A, Ahat, B, R)


@pytest.fixture
def random_model():
    """Factory: random_model(seed, **kwargs) -> ModelCM."""
    def factory(seed: int, **kwargs) -> ModelCM:
        return make_random_model(np.random.default_rng(seed), **kwargs)
    return factory


@pytest.fixture
def random_shaped_model():
    """Factory: random_shaped_model(seed) -> ModelCM with n, m <= 4 and a random rank of Ahat."""
    def factory(seed: int) -> ModelCM:
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        return make_random_model(rng, n, m, rank=int(rng.integers(1, n + 1)))
    return factory
