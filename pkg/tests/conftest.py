import importlib.util

import pytest


def _has(module: str) -> bool:
    return importlib.util.find_spec(module) is not None


HAS_SDPAP = _has("sdpap")
HAS_CVXPY = _has("cvxpy")

needs_sdpap = pytest.mark.skipif(not HAS_SDPAP, reason="sdpa-multiprecision not installed")
needs_cvxpy = pytest.mark.skipif(not HAS_CVXPY, reason="cvxpy not installed")


def pytest_addoption(parser):
    parser.addoption("--stretch", action="store_true", default=False,
                     help="run the multi-hour reproduction instances")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--stretch"):
        return
    skip = pytest.mark.skip(reason="stretch instance; pass --stretch to run")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)
