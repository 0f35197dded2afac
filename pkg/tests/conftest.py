from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES

from hypothesis import settings

settings.register_profile("subkoba", max_examples=30, deadline=None)
settings.load_profile("subkoba")
