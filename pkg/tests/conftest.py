import numpy as np
import pytest

import swldpc as sw
from swldpc.simulate import build_systematic_code


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def small_code():
    """Rate-1/2 regular code, n=240."""
    return build_systematic_code(120, 0.5, seed=701)


@pytest.fixture(scope="session")
def example1_model():
    return sw.CorrelationModel(0.4, sw.BinaryAsymmetricChannel(0.05, 0.185))


@pytest.fixture(scope="session")
def example2_model():
    return sw.CorrelationModel(0.4, sw.BinaryAsymmetricChannel(0.09, 0.143))


@pytest.fixture(scope="session")
def example1_targets():
    return sw.RateTargets(rx1=0.8, rx2=0.7, rc1=0.9, rc2=0.94, cf=0.4998, cb=0.4839)


@pytest.fixture(scope="session")
def example2_targets():
    return sw.RateTargets(rx1=0.8, rx2=0.7, rc1=0.85, rc2=0.9, cf=0.4839, cb=0.4703)
