import json
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from sexticcm.exactmath import spec_from_json

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def fixture_json(name):
    return json.loads((resources.files("sexticcm") / "data" / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def zeta7():
    return spec_from_json(fixture_json("zeta7.json"))


@pytest.fixture(scope="session")
def d12():
    return spec_from_json(fixture_json("d12.json"))


@pytest.fixture(scope="session")
def case3():
    return spec_from_json(fixture_json("case3.json"))


@pytest.fixture(scope="session")
def zeta7_p3_outcome(zeta7):
    """The full search for the zeta_7 field at p = 3 (about ten thousand solutions), computed once."""
    from sexticcm.embedding import search_solutions

    return search_solutions(zeta7, 3, certify=False)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
