"""Shared fixtures; the package is importable from src/ without installing."""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
if str(ROOT / "tests") not in sys.path:
    sys.path.insert(0, str(ROOT / "tests"))

import pytest


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return ROOT / "golden"


@pytest.fixture()
def golden(golden_dir):
    def load(name: str):
        from neron.parser import parse
        return parse((golden_dir / name).read_text())
    return load
