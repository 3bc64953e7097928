import numpy as np
import pytest

from lrkitaev.model import ModelParams


def random_params(rng: np.random.Generator, n: int) -> ModelParams:
    """Random parameter point in the physically scanned ranges."""
    return ModelParams(
        n=n,
        alpha=float(rng.uniform(1 / 3, 3.0)),
        theta=float(rng.uniform(0.05, 0.95) * np.pi),
        epsilon=float(rng.uniform(-1.0, 1.5)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
