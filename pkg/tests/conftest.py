import numpy as np
import pytest

from gkdv import acceptance, linop


@pytest.fixture(scope="session")
def resources():
    """Shared lazy store for the heavy artifacts (spectrum, shooting runs)."""
    return acceptance.Resources()


@pytest.fixture(scope="session")
def spectrum6(resources):
    return resources.spectrum


@pytest.fixture(scope="session")
def sgrid():
    return linop.spectrum_grid()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
