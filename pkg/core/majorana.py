"""Majorana representation: Dicke coefficients <-> roots <-> spinors"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from core.errors import InvalidInputError, ScaleError, SizeError
from core.numerics import (
    ComplexPoly,
    ExtendedComplex,
    MajoranaRootSet,
    binomial_row,
    poly_roots,
)
from core.states import QubitRegisterState, StateKind, SymmetricState

logger = logging.getLogger(__name__)

__all__ = [
    "MajoranaRootSet",
    "Spinor",
    "spinor_from_root",
    "spinors_from_roots",
    "roots_from_dicke",
    "dicke_from_roots",
    "dicke_from_points",
    "dicke_from_spinors",
    "symmetrize",
    "match_root_sets",
    "generalized_spinors",
    "degeneracy_pattern",
]


@dataclass(frozen=True)
class Spinor:
    """Single-qubit pure state c0|0> + c1|1>, normalized with c0 real and >= 0"""

    c0: complex
    c1: complex

    def __post_init__(self):
        vec = np.array([self.c0, self.c1], dtype=complex)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0 or not np.isfinite(norm):
            raise InvalidInputError("spinor must be a finite nonzero vector")
        vec /= norm
        if vec[0] != 0:
            vec *= np.conj(vec[0]) / abs(vec[0])
            vec[0] = abs(vec[0])
        else:
            vec = np.array([0.0, 1.0], dtype=complex)
        object.__setattr__(self, "c0", complex(vec[0]))
        object.__setattr__(self, "c1", complex(vec[1]))

    @classmethod
    def from_root(cls, root: ExtendedComplex) -> "Spinor":
        c0, c1 = root.homogeneous()
        return cls(c0, c1)

    @classmethod
    def from_orientation(cls, alpha: float, beta: float) -> "Spinor":
        """cos(beta/2)|0> + e^{i alpha} sin(beta/2)|1>"""
        return cls(math.cos(beta / 2), np.exp(1j * alpha) * math.sin(beta / 2))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    @property
    def beta(self) -> float:
        return 2.0 * math.atan2(abs(self.c1), abs(self.c0))

    @property
    def alpha(self) -> float:
        if self.c0 == 0 or self.c1 == 0:
            return 0.0
        return float(np.angle(self.c1)) % (2.0 * math.pi)

    @property
    def bloch(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([math.sin(b) * math.cos(a), math.sin(b) * math.sin(a), math.cos(b)])

    @property
    def root(self) -> ExtendedComplex:
        return ExtendedComplex.from_homogeneous(self.c0, self.c1)


def spinor_from_root(root: ExtendedComplex) -> Spinor:
    return Spinor.from_root(root)


def spinors_from_roots(roots: MajoranaRootSet) -> List[Spinor]:
    return [Spinor.from_root(p) for p in roots.points()]


def majorana_polynomial(state: SymmetricState) -> ComplexPoly:
    """sum_k (-1)^k sqrt(C(N,k)) d_k z^k"""
    n = state.n_qubits
    signs = (-1.0) ** np.arange(n + 1)
    return ComplexPoly(tuple(signs * np.sqrt(binomial_row(n)) * state.dicke))


def roots_from_dicke(state: SymmetricState) -> MajoranaRootSet:
    """Majorana roots of a state; missing top coefficients give roots at infinity"""
    roots = poly_roots(majorana_polynomial(state), state.n_qubits)
    logger.debug("N=%d: %d finite roots, %d at infinity",
                 state.n_qubits, len(roots.finite_roots), roots.infinity_count)
    return roots


def dicke_from_spinors(spinors: Sequence[Spinor]) -> SymmetricState:
    """Symmetrized product of spinors, built in the Dicke basis.

    The product of the linear forms c0 + c1 t has coefficient a_m on t^m, the
    total weight of products with m ones, so d_{N-m} = a_m / sqrt(C(N, m)).
    """
    if len(spinors) < 1:
        raise InvalidInputError("need at least one spinor")
    poly = np.array([1.0 + 0j])
    for s in spinors:
        poly = np.convolve(poly, [s.c0, s.c1])
    n = len(spinors)
    dicke = (poly / np.sqrt(binomial_row(n)))[::-1]
    return SymmetricState.from_coefficients(dicke)


def dicke_from_points(points: Sequence[ExtendedComplex]) -> SymmetricState:
    return dicke_from_roots(MajoranaRootSet.from_points(points))


def dicke_from_roots(roots: MajoranaRootSet) -> SymmetricState:
    """Inverse of roots_from_dicke up to global phase"""
    if roots.total < 1:
        raise InvalidInputError("need at least one root")
    for z in roots.finite_roots:
        if abs(z) > settings.root_scale_limit:
            raise ScaleError(f"root {z} is too large; pass it as infinity")
    return dicke_from_spinors(spinors_from_roots(roots))


def symmetrize(spinors: Sequence[Spinor]) -> QubitRegisterState:
    """Explicit sum over permutations of tensor products"""
    n = len(spinors)
    if n < 1:
        raise InvalidInputError("need at least one spinor")
    if n > settings.symmetrize_max_qubits:
        raise SizeError(
            f"explicit symmetrization is limited to {settings.symmetrize_max_qubits} qubits;"
            " use dicke_from_spinors with to_register instead"
        )
    vectors = [s.vector for s in spinors]
    total = np.zeros(2 ** n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        product = vectors[perm[0]]
        for i in perm[1:]:
            product = np.kron(product, vectors[i])
        total += product
    return QubitRegisterState.from_amplitudes(total)


def match_root_sets(a: MajoranaRootSet, b: MajoranaRootSet) -> float:
    """Largest chordal distance under a greedy nearest-pair matching"""
    pa, pb = a.points(), b.points()
    if len(pa) != len(pb):
        raise InvalidInputError(f"root sets have sizes {len(pa)} and {len(pb)}")
    if not pa:
        return 0.0
    dist = np.array([[p.chordal_distance(q) for q in pb] for p in pa])
    worst = 0.0
    for _ in range(len(pa)):
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        worst = max(worst, float(dist[i, j]))
        dist[i, :] = np.inf
        dist[:, j] = np.inf
    return worst


def generalized_spinors(kind, n: int, theta: float) -> MajoranaRootSet:
    """Closed-form Majorana roots of the generalized GHZ and W-Wbar families"""
    kind = StateKind(kind)
    if not (0.0 < theta < math.pi):
        raise InvalidInputError("theta must lie in the open interval (0, pi)")
    t = math.tan(theta / 2)
    if kind is StateKind.GHZ_GEN:
        order, phase = n, (0.0 if n % 2 else math.pi)
        extra: Tuple[Optional[complex], ...] = ()
    elif kind is StateKind.WWBAR_GEN:
        if n < 3:
            raise InvalidInputError("wwbar-gen needs N >= 3")
        order, phase = n - 2, (0.0 if n % 2 else math.pi)
        extra = (0j, None)
    else:
        raise InvalidInputError(f"no closed-form roots for {kind.value}")
    radius = t ** (1.0 / order)
    finite = [radius * np.exp(1j * (phase + 2 * math.pi * j) / order) for j in range(order)]
    finite.extend(z for z in extra if z is not None)
    return MajoranaRootSet(tuple(finite), sum(1 for z in extra if z is None))


def degeneracy_pattern(roots: MajoranaRootSet, tol: float = 1e-7) -> Tuple[int, ...]:
    """Multiplicities of coincident roots, descending; (1,1,1) is the generic 3-qubit class"""
    points = roots.points()
    remaining = list(range(len(points)))
    counts = []
    while remaining:
        seed = remaining.pop(0)
        cluster = [seed]
        for j in list(remaining):
            if any(points[j].chordal_distance(points[c]) <= tol for c in cluster):
                cluster.append(j)
                remaining.remove(j)
        counts.append(len(cluster))
    return tuple(sorted(counts, reverse=True))
