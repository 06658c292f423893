import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from core.majorana import dicke_from_roots  # noqa: E402
from core.numerics import MajoranaRootSet  # noqa: E402


NAMED_SPECS = [
    "ghz:3", "ghz:4", "ghz:5", "ghz:6",
    "w:3", "w:4", "w:5", "w:6",
    "wbar:4", "wbar:5",
    "wwbar:3", "wwbar:4", "wwbar:5", "wwbar:6",
    "ghz-gen:4:pi/3", "wwbar-gen:5:2pi/5",
]


@pytest.fixture
def rng():
    return np.random.default_rng(20231018)


def random_symmetric_state(rng, n):
    """Symmetric state with Gaussian Dicke coefficients"""
    from core.states import SymmetricState

    coeffs = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    return SymmetricState.from_coefficients(coeffs)


def random_root_state(rng, n):
    roots = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return dicke_from_roots(MajoranaRootSet(tuple(roots), 0))


def random_unitary(rng):
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
