from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_trio(fixtures_dir: Path) -> list[Path]:
    """The three-version end-to-end fixture, reference first."""
    return [fixtures_dir / f"song_v{i}.tabtxt" for i in range(3)]
