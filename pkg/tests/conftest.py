import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from spgames.random_games import random_regular_game, random_strict_game

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
strict_games = seeds.map(lambda s: random_strict_game(np.random.default_rng(s)))
regular_games = seeds.map(lambda s: random_regular_game(np.random.default_rng(s)))
nonneg_regular_games = seeds.map(lambda s: random_regular_game(np.random.default_rng(s), nonneg_costs=True))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
