import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from einso.groebner import BasisCache

CACHE_DIR = Path(__file__).resolve().parent.parent / ".einso_cache"


@pytest.fixture(scope="session")
def basis_cache() -> BasisCache:
    """Shared on-disk cache: reruns of the expensive eliminations are free."""
    return BasisCache(CACHE_DIR)
