import functools

import pytest

from coringkit import fixtures


@functools.lru_cache(maxsize=None)
def _load(name):
    return fixtures.load(name)


@pytest.fixture
def load():
    """Shipped fixtures by name, parsed once per session."""
    return _load
