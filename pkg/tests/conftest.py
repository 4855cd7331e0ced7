import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ALPHA_GRID = [round(0.1 * k, 1) for k in range(10)]


@st.composite
def joints(draw, max_nx=6, max_ny=5, min_nx=1):
    nx = draw(st.integers(min_nx, max_nx))
    ny = draw(st.integers(1, max_ny))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    m = rng.exponential(size=(nx, ny))
    # sprinkle exact zeros so boundary cases show up
    m[rng.random((nx, ny)) < draw(st.sampled_from([0.0, 0.3, 0.6]))] = 0.0
    if m.sum() == 0:
        m[0, 0] = 1.0
    return m / m.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.format_results():
        terminalreporter.write_line(line)
