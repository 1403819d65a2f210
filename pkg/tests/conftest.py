import numpy as np
import pytest

from src.core.grover import TargetFile, grover_gate
from src.services.warp_service import catalog_gate


def haar_unitary(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    """Random U(n) via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q @ np.diag(r.diagonal() / np.abs(r.diagonal()))


def haar_special(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    u = haar_unitary(rng, n)
    return u / np.linalg.det(u) ** (1 / n)


@pytest.fixture
def rng():
    return np.random.default_rng(2025)


@pytest.fixture
def random_unitary(rng):
    return lambda n=4: haar_unitary(rng, n)


@pytest.fixture
def random_special(rng):
    return lambda n=4: haar_special(rng, n)


@pytest.fixture
def u10():
    return grover_gate(TargetFile(1, 0))


@pytest.fixture
def w4u10(u10):
    return catalog_gate("W4").matrix @ u10
