import pytest

from hypcount.fuchsian import BUNDLED_GROUP, TRIVIAL_GROUP, count_cosets, load_group
from hypcount.numerics import DEFAULT_CONTEXT
from hypcount.spectral import BUNDLED_SPECTRUM, load_spectrum

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def ctx():
    return DEFAULT_CONTEXT


@pytest.fixture(scope="session")
def bolza():
    return load_group(BUNDLED_GROUP)


@pytest.fixture(scope="session")
def cyclic():
    return load_group(TRIVIAL_GROUP)


@pytest.fixture(scope="session")
def bolza_table_400(bolza):
    return count_cosets(bolza, 400)


@pytest.fixture(scope="session")
def synthetic():
    return load_spectrum(BUNDLED_SPECTRUM)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
