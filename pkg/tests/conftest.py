import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pendnf.dynamics import PendulumParams  # noqa: E402


@pytest.fixture
def par():
    return PendulumParams(I=1.0, g=1.0)


@pytest.fixture
def par_phys():
    return PendulumParams(I=2.5, g=0.7)
