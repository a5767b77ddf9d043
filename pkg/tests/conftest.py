from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from a1bordism import pipelines as pl

_PIPELINE_CACHE = {}


@pytest.fixture(scope="session")
def pipeline_cache():
    """Run each acceptance pipeline once per session."""

    def run(name: str, through: int):
        key = (name, through)
        if key not in _PIPELINE_CACHE:
            _PIPELINE_CACHE[key] = pl.run_pipeline(name, through)
        return _PIPELINE_CACHE[key]

    return run
