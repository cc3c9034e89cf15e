import os
import sys

import pytest

# Allow running the suite from a fresh checkout without installing.
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from tactiguide.geometry import Point, Shape  # noqa: E402
from tactiguide.shapes import load_all_bundled  # noqa: E402


@pytest.fixture(scope="session")
def bundled_shapes():
    return load_all_bundled()


@pytest.fixture
def unit_square():
    """The 100x100 square used throughout the worked examples (thickness 10)."""
    return Shape(
        name="square",
        vertices=(Point(0, 0), Point(100, 0), Point(100, 100), Point(0, 100)),
        thickness=10,
    )
