"""Global fixture definitions for the pcmeter test suite."""

from pathlib import Path

import pytest

from pcmeter.model import ComplianceSpec, ProcessLog
from pcmeter.payment import generate_log, payment_spec
from utils import FULL_SCENARIO, NON_SCENARIO, PARTIAL_SCENARIO

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def spec() -> ComplianceSpec:
    """The shipped payment process spec."""
    return payment_spec()


@pytest.fixture(scope="session")
def scenario_log() -> ProcessLog:
    """Log of the full, partial and non-compliance payment scenarios."""
    return generate_log([FULL_SCENARIO, PARTIAL_SCENARIO, NON_SCENARIO])


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
