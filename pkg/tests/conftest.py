import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def disk_points(r_min=0.0, r_max=0.8):
    """Strategy for points r e^{it} with r_min <= r <= r_max."""
    return st.builds(
        lambda r, t: r * cmath.exp(1j * t),
        st.floats(r_min, r_max),
        st.floats(0, 2 * math.pi),
    )


def unimodular():
    return st.floats(0, 2 * math.pi).map(lambda t: cmath.exp(1j * t))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
