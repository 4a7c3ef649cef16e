from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from agilekb import load_knowledge_base

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "agilekb" / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def kb():
    """One shared read-only knowledge base over the bundled seed."""
    return load_knowledge_base()


@pytest.fixture()
def fresh_kb():
    """A private knowledge base for tests that mutate counters or caches."""
    return load_knowledge_base()
