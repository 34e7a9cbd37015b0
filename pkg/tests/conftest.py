import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semstore import service


@pytest.fixture(scope="session")
def seed_graph():
    return service.seed_store(service.ServiceConfig())


@pytest.fixture(scope="session")
def seed_config():
    return service.ServiceConfig()
