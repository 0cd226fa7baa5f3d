import functools

import pytest

from acterwilliger.catalog import CATALOG_SPECS, from_spec
from acterwilliger.scheme import build_scheme
from acterwilliger.terwilliger import terwilliger_basis, wedderburn_report


@functools.lru_cache(maxsize=None)
def catalog_group(name):
    return from_spec(CATALOG_SPECS[name])


@functools.lru_cache(maxsize=None)
def catalog_scheme(name):
    return build_scheme(catalog_group(name))


@functools.lru_cache(maxsize=None)
def catalog_twa(name):
    return terwilliger_basis(catalog_scheme(name))


@functools.lru_cache(maxsize=None)
def catalog_report(name):
    return wedderburn_report(catalog_group(name), scheme=catalog_scheme(name))


@pytest.fixture
def group():
    return catalog_group


@pytest.fixture
def scheme():
    return catalog_scheme


@pytest.fixture
def report():
    return catalog_report


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
