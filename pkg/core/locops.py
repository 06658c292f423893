"""Identical local operations A x A x ... x A and Moebius maps of the Majorana roots"""
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from core.errors import InvalidInputError
from core.majorana import Spinor, dicke_from_spinors, roots_from_dicke, spinors_from_roots
from core.numerics import ExtendedComplex
from core.states import SymmetricState

logger = logging.getLogger(__name__)

_DISTINCT_TOL = 1e-9
_BRANCH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LocalOp:
    """Invertible 2x2 operator scaled to unit determinant.

    Of the two square roots the branch with Re(tr) >= 0 is kept, ties broken
    by Im(tr) >= 0.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise InvalidInputError("local operator must be a finite 2x2 matrix")
        det = complex(np.linalg.det(m))
        if abs(det) <= 1e-14 * max(1.0, float(np.linalg.norm(m)) ** 2):
            raise InvalidInputError("local operator is singular")
        m = m / np.sqrt(det)
        trace = complex(np.trace(m))
        if trace.real < -_BRANCH_TOL or (abs(trace.real) <= _BRANCH_TOL and trace.imag < 0):
            m = -m
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def inverse(self) -> "LocalOp":
        return LocalOp(np.linalg.inv(self.matrix))

    def apply(self, spinor: Spinor) -> Spinor:
        c0, c1 = self.matrix @ spinor.vector
        return Spinor(c0, c1)

    def map_point(self, point: ExtendedComplex) -> ExtendedComplex:
        """Moebius action z -> (a z + b)/(c z + d) in spinor coordinates z = c1/c0"""
        c0, c1 = self.matrix @ point.homogeneous()
        return ExtendedComplex.from_homogeneous(c0, c1)

    def projective_distance(self, other: "LocalOp") -> float:
        """1 - |<A, B>_F| / (|A| |B|), zero iff equal up to scale"""
        inner = abs(np.vdot(self.matrix, other.matrix))
        return float(1.0 - inner / (np.linalg.norm(self.matrix) * np.linalg.norm(other.matrix)))


def _frame(points: Sequence[ExtendedComplex]) -> np.ndarray:
    """Matrix sending the spinors of 0, 1, inf to those of the three points"""
    u1, u2, u3 = (p.homogeneous() for p in points)
    alpha, beta = np.linalg.solve(np.column_stack([u1, u3]), u2)
    return np.column_stack([alpha * u1, beta * u3])


def _check_triple(points: Sequence[ExtendedComplex], label: str) -> None:
    if len(points) != 3:
        raise InvalidInputError(f"{label} needs exactly three points")
    for i in range(3):
        for j in range(i + 1, 3):
            if points[i].chordal_distance(points[j]) <= _DISTINCT_TOL:
                raise InvalidInputError(f"{label} points {i} and {j} coincide")


def moebius_from_triples(src: Sequence[ExtendedComplex], dst: Sequence[ExtendedComplex]) -> LocalOp:
    """Unique map with src[i] -> dst[i], composed through 0, 1, inf"""
    _check_triple(src, "source")
    _check_triple(dst, "target")
    return LocalOp(_frame(dst) @ np.linalg.inv(_frame(src)))


def apply_identical_local(op: LocalOp, state: SymmetricState) -> SymmetricState:
    """A applied to every qubit, acting on each Majorana spinor"""
    spinors = [op.apply(s) for s in spinors_from_roots(roots_from_dicke(state))]
    return dicke_from_spinors(spinors)


def clockwise_order(points: Sequence[ExtendedComplex]) -> List[ExtendedComplex]:
    """Sort by polar angle from the north pole, then clockwise azimuth"""

    def key(point: ExtendedComplex):
        spinor = Spinor.from_root(point)
        turn = (-spinor.alpha) % (2.0 * math.pi)
        if turn > 2.0 * math.pi - 1e-9:
            turn = 0.0
        return round(spinor.beta, 9), turn

    return sorted(points, key=key)
