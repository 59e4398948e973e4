import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ettlab.multigraph import Multigraph, fat_cycle, fat_triangle, random_multigraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PETERSEN = Multigraph(10, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                           (5, 7), (7, 9), (6, 9), (6, 8), (5, 8)])


@st.composite
def multigraphs(draw, n_min=2, n_max=6, mu_max=3):
    n = draw(st.integers(n_min, n_max))
    budget = draw(st.integers(n - 1, n * (n - 1) // 2 * mu_max))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_multigraph(n, mu_max, budget, seed)


@pytest.fixture
def ft2():
    return fat_triangle(2)


@pytest.fixture
def petersen():
    return PETERSEN


@pytest.fixture
def k2():
    return Multigraph(2, [(0, 1)])


@pytest.fixture
def triangle():
    return fat_cycle(3, [1, 1, 1])
