'''
pytest configuration.

* The package modules import each other by plain module name, so the package
  directory is put on sys.path, as provecomplexheat/__init__.py does.
* Full-length proofs are marked "slow" and only run with --runslow.
'''
import os
import sys

import pytest

PACKAGE_DIRECTORY = os.path.join(os.path.dirname(os.path.realpath(__file__)), "..", "provecomplexheat")
TEMPLATES_DIRECTORY = os.path.join(os.path.dirname(os.path.realpath(__file__)), "..", "templates")
sys.path.insert(0, os.path.realpath(PACKAGE_DIRECTORY))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full-length proofs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-length proof, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def templates_directory():
    return os.path.realpath(TEMPLATES_DIRECTORY)


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(20211)
