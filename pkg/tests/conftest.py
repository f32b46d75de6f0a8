import sys

import pytest

from kgraphwave import fixture_path, load_kgraph_file


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(label): acceptance criterion; one PASS/FAIL line is printed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        status = "PASS" if rep.passed else "FAIL"
        print(f"ACCEPTANCE {marker.args[0]}: {status}", file=sys.__stdout__)


@pytest.fixture(scope="session")
def lambda3():
    return load_kgraph_file(fixture_path("lambda3"))


@pytest.fixture(scope="session")
def ledrappier():
    return load_kgraph_file(fixture_path("ledrappier"))


@pytest.fixture(scope="session")
def sphere():
    return load_kgraph_file(fixture_path("lambda1-sphere"))


@pytest.fixture(scope="session")
def bouquet2():
    return load_kgraph_file(fixture_path("bouquet-2"))


@pytest.fixture(scope="session")
def bouquet3():
    return load_kgraph_file(fixture_path("bouquet-3"))
