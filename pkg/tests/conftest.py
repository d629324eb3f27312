import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from idelegenus.link import CoverSpec, LinkWindow
from idelegenus.verify import random_instance

settings.register_profile("default", max_examples=80, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def window(lk, labels=None):
    labels = labels or [f"K{i + 1}" for i in range(len(lk))]
    return LinkWindow(tuple(labels), tuple(map(tuple, lk)))


@pytest.fixture
def hopf():
    return window([[0, 1], [1, 0]])


@pytest.fixture
def hopf_cover():
    return CoverSpec(2, {"K1": 1})


@st.composite
def instances(draw, max_n=12, max_knots=6, unbranched=False):
    """A random valid (window, cover), driven by a hypothesis-chosen seed."""
    seed = draw(st.integers(0, 2**32))
    return random_instance(random.Random(seed), max_n, max_knots, unbranched=unbranched)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; shown again in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        print(line)
        lines.append(line)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
