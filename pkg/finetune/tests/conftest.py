from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def train_path() -> str:
    return str(FIXTURES / "train_160.jsonl")


@pytest.fixture(scope="session")
def test_path() -> str:
    return str(FIXTURES / "test_40.jsonl")
