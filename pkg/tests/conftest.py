import json
from pathlib import Path

import pytest

FIXTURES_ROOT = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_STORE = FIXTURES_ROOT / "store"


@pytest.fixture(scope="session")
def fixture_store() -> str:
    assert FIXTURE_STORE.is_dir(), "run tools/make_snapshots.py to build fixtures"
    return str(FIXTURE_STORE)


@pytest.fixture(scope="session")
def manifest() -> dict:
    entries = json.loads((FIXTURES_ROOT / "manifest.json").read_text())["snapshots"]
    return {
        entry.get("cpc_subgroup", entry.get("kind")): entry for entry in entries
    }
