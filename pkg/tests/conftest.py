import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pathgrid import g0_graph, run_query


@pytest.fixture(scope="session")
def g0():
    return g0_graph()


@pytest.fixture(scope="session")
def g0_west_east(g0):
    return run_query(g0, 'PATHS LENGTH <= 2 FROM region = "west" TO region = "east"')
