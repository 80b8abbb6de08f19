import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from pdyn.errors import PdynError
from pdyn.p1 import Mobius, RatMap1

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_ints = st.integers(-5, 5)
rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))


@st.composite
def rat_maps(draw, max_degree=3):
    """Random rational maps of degree 1..max_degree (reduced on construction)."""
    d = draw(st.integers(1, max_degree))
    p = draw(st.lists(small_ints, min_size=d + 1, max_size=d + 1))
    q = draw(st.lists(small_ints, min_size=d + 1, max_size=d + 1))
    try:
        return RatMap1(p, q)
    except PdynError:
        assume(False)


@st.composite
def mobius_maps(draw):
    a, b, c, d = (draw(small_ints) for _ in range(4))
    assume(a * d - b * c != 0)
    return Mobius(a, b, c, d)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
