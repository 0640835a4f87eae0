from __future__ import annotations

from pathlib import Path

import pytest

from repo_fixtures import build_clean_repo, build_planted_repo


@pytest.fixture
def clean_repo(tmp_path: Path) -> Path:
    root = tmp_path / "clean"
    build_clean_repo(root)
    return root


@pytest.fixture
def planted_repo(tmp_path: Path) -> tuple[Path, dict]:
    root = tmp_path / "planted"
    manifest = build_planted_repo(root)
    return root, manifest
