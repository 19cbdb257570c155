"""Shared test configuration.

Tests must not read or write the user-level disk cache: a stale entry
written by an older build would silently shadow freshly computed values.
Every test session gets its own empty cache directory instead.
"""

import pytest

from qtsym.config import update_config


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    update_config(cache_dir=tmp_path_factory.mktemp("qtsym-cache"))
    yield
