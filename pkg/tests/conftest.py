from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SCRIPTS = ROOT / "scripts"
for path in (ROOT, SCRIPTS):
    if str(path) not in sys.path:
        sys.path.insert(0, str(path))

from cck_config import set_config  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive grids over many signatures")


@pytest.fixture(autouse=True)
def _fresh_config(monkeypatch):
    for name in ("CCK_MAX_SIGNATURE", "CCK_MAX_REP_SIZE", "CCK_WEYL_RANK_LIMIT", "CCK_SEED", "CCK_CATALOG", "CCK_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    set_config(None)
    yield
    set_config(None)
