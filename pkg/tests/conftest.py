import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fuzzylattice import bundled_kb_path, compile_kb, load_information_system

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def system():
    return load_information_system(bundled_kb_path())


@pytest.fixture(scope="session")
def kb(system):
    return compile_kb(system)


@pytest.fixture(scope="session")
def kb_path():
    return bundled_kb_path()
