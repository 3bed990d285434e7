import sys
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def threebus_dir() -> Path:
    return FIXTURES / "3bus"


@pytest.fixture(scope="session")
def bottleneck_dir() -> Path:
    return FIXTURES / "bottleneck"


@pytest.fixture(scope="session")
def minius_dir() -> Path:
    return FIXTURES / "minius"
