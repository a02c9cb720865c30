import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from pdcdga import corpus  # noqa: E402
from pdcdga.duality import OrientedCDGA  # noqa: E402

# every instance the staged pipeline runs on (n >= 7)
RUNNABLE = tuple(n for n in corpus.NAMES if n != "cp2-formal-4")


@pytest.fixture
def oriented():
    """Factory: corpus name -> (OrientedCDGA, n)."""

    def make(name):
        inst = corpus.build(name)
        return OrientedCDGA(inst.algebra, inst.orientation), inst.n

    return make
