import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from staircover import CoveringInstance, Lattice


@pytest.fixture
def quarters() -> CoveringInstance:
    """Exact 1-fold covering of the unit window by four quarter anchors."""
    return CoveringInstance.of(
        1, 1, [(0, 0), (0, "1/2"), ("1/2", 0), ("1/2", "1/2")]
    )


def diag_lattice(k: int) -> Lattice:
    """u = (1, 0), v = (c, c) with c = 1/(2k+1); verified k-fold in tests."""
    c = Fraction(1, 2 * k + 1)
    return Lattice.of(1, 0, c, c)


def grid_lattice(m: int) -> Lattice:
    return Lattice.of(Fraction(1, m), 0, 0, Fraction(1, m))
