import math
import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def right_angle_pair():
    from ddcosmo.geometry import symmetric_pair

    return symmetric_pair(math.pi / 2)


@pytest.fixture(scope="session")
def skew_pair():
    from ddcosmo.geometry import Disk, intersect

    return intersect(Disk(0j, 1.0), Disk(1.2 + 0.4j, 0.8))


@pytest.fixture(autouse=True)
def _quiet_alias_warnings():
    from ddcosmo.errors import AliasRisk

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasRisk)
        yield


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
