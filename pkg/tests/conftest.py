import numpy as np
import pytest

from mdmsim.qcore import Qubit1, haar_random_qubit


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def random_states(rng):
    def make(n: int) -> list[Qubit1]:
        return [haar_random_qubit(rng) for _ in range(n)]

    return make
