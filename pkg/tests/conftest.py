import random

import pytest
from hypothesis import settings

from hperturb.fixtures import interval_perturbation, interval_sdr

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def interval():
    return interval_sdr()


@pytest.fixture
def interval_delta():
    return interval_perturbation()


@pytest.fixture
def rng():
    return random.Random(20261018)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
