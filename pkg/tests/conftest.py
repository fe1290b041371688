import math

import pytest
from hypothesis import settings

from dpcollapse.config import load_config
from dpcollapse.dpenergy import PiezoCapacitorSpec, PlateSpec
from dpcollapse.materials import default_database

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def db():
    return default_database()


@pytest.fixture(scope="session")
def aluminium(db):
    return db["aluminium"]


@pytest.fixture(scope="session")
def pzt(db):
    return db["PIC-153"]


@pytest.fixture(scope="session")
def fig6():
    return load_config("fig6.cfg")


@pytest.fixture(scope="session")
def fig8():
    return load_config("fig8.cfg")


@pytest.fixture(scope="session")
def delayed_cfg():
    return load_config("delayed.cfg")


@pytest.fixture(scope="session")
def piezo_cap(aluminium, pzt):
    A = math.pi * (1.5e-3) ** 2
    return PiezoCapacitorSpec(PlateSpec("extended", A, 2e-4, pzt), PlateSpec("displaced", A, 1e-4, aluminium))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
