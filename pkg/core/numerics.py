"""Dense numerical kernels: complex polynomial roots and 4x4 eigensolvers.

Everything here is a pure function of its inputs. Tolerances are read from
``config.settings`` at call time.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.sparse.csgraph import connected_components
from scipy.special import gammaln

from config.settings import settings
from core.errors import ConvergenceError, InvalidInputError, NonPhysicalSpectrumError

logger = logging.getLogger(__name__)

# Minkowski metric
G = np.diag([1.0, -1.0, -1.0, -1.0])

_EPS = np.finfo(float).eps
_TINY = 1e-300


def minkowski_norm(x: np.ndarray) -> float:
    """x^T G x"""
    x = np.asarray(x, dtype=float)
    return float(x @ G @ x)


def log_binomial_row(n: int) -> np.ndarray:
    """log C(n, k) for k = 0..n"""
    k = np.arange(n + 1)
    if n <= 20:
        return np.log(np.array([math.comb(n, int(j)) for j in k], dtype=float))
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def binomial_row(n: int) -> np.ndarray:
    """C(n, k) for k = 0..n as floats (exact integers up to n = 20)"""
    if n <= 20:
        return np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
    return np.exp(log_binomial_row(n))


@dataclass(frozen=True)
class ExtendedComplex:
    """Point of the Riemann sphere; ``value`` is None for the point at infinity"""

    value: Optional[complex] = None

    @classmethod
    def finite(cls, z) -> "ExtendedComplex":
        return cls(complex(z))

    @classmethod
    def infinity(cls) -> "ExtendedComplex":
        return cls(None)

    @classmethod
    def from_homogeneous(cls, c0: complex, c1: complex) -> "ExtendedComplex":
        """Point z = c1 / c0 of a nonzero pair"""
        if c0 == 0:
            if c1 == 0:
                raise InvalidInputError("zero vector has no point on the sphere")
            return cls.infinity()
        return cls(complex(c1 / c0))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def homogeneous(self) -> np.ndarray:
        """Unit pair (c0, c1) with z = c1 / c0"""
        if self.value is None:
            return np.array([0.0, 1.0], dtype=complex)
        vec = np.array([1.0, self.value], dtype=complex)
        return vec / np.linalg.norm(vec)

    def chordal_distance(self, other: "ExtendedComplex") -> float:
        """Chordal distance on the Riemann sphere of diameter 2"""
        u = self.homogeneous()
        v = other.homogeneous()
        return float(2.0 * abs(u[0] * v[1] - u[1] * v[0]))

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        return f"{self.value.real:.17g}{self.value.imag:+.17g}j"


@dataclass(frozen=True)
class MajoranaRootSet:
    """Multiset of finite roots plus a multiplicity at infinity"""

    finite_roots: Tuple[complex, ...] = ()
    infinity_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "finite_roots", tuple(complex(z) for z in self.finite_roots))
        if self.infinity_count < 0:
            raise InvalidInputError("infinity_count must be nonnegative")

    @property
    def total(self) -> int:
        return len(self.finite_roots) + self.infinity_count

    def points(self) -> List[ExtendedComplex]:
        pts = [ExtendedComplex.finite(z) for z in self.finite_roots]
        pts.extend(ExtendedComplex.infinity() for _ in range(self.infinity_count))
        return pts

    @classmethod
    def from_points(cls, points: Sequence[ExtendedComplex]) -> "MajoranaRootSet":
        finite = tuple(p.value for p in points if not p.is_infinite)
        return cls(finite, sum(1 for p in points if p.is_infinite))


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with coefficients in ascending degree order"""

    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs or not any(c != 0 for c in coeffs):
            raise InvalidInputError("polynomial needs at least one nonzero coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return max(k for k, c in enumerate(self.coeffs) if c != 0)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        return P.polyval(z, self.as_array())


def _zero_root_multiplicity(coeffs: np.ndarray, threshold: float) -> int:
    """Number of leading (low-order) coefficients below threshold"""
    count = 0
    for c in coeffs:
        if abs(c) > threshold:
            break
        count += 1
    return count


def root_residuals(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Per-root residual |p(z)| / max|c_k|.

    Outside the unit disc the residual is taken on the reversed polynomial at
    1/z, i.e. on z^-n p(z), so large roots are not penalised for their size.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    roots = np.asarray(roots, dtype=complex)
    scale = max(float(np.max(np.abs(coeffs))), _TINY)
    out = np.empty(roots.size)
    inside = np.abs(roots) <= 1.0
    out[inside] = np.abs(P.polyval(roots[inside], coeffs))
    with np.errstate(all="ignore"):
        out[~inside] = np.abs(P.polyval(1.0 / roots[~inside], coeffs[::-1]))
    return out / scale


def _initial_guesses(monic: np.ndarray, rng: Optional[np.random.Generator]) -> np.ndarray:
    n = monic.size - 1
    radius = abs(monic[0]) ** (1.0 / n)
    offset = 0.4
    if rng is not None:
        radius *= rng.uniform(0.5, 2.0)
        offset = rng.uniform(0.0, 2.0 * np.pi)
    angles = offset + 2.0 * np.pi * np.arange(n) / n
    guesses = radius * np.exp(1j * angles)
    if rng is not None:
        guesses += 1e-3 * radius * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return guesses


def _aberth(monic: np.ndarray, z: np.ndarray, max_iter: int) -> Tuple[np.ndarray, bool, int]:
    deriv = P.polyder(monic)
    z = z.copy()
    for iteration in range(1, max_iter + 1):
        with np.errstate(all="ignore"):
            value = P.polyval(z, monic)
            ratio = np.where(value == 0, 0.0, value / P.polyval(z, deriv))
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        bad = ~np.isfinite(step)
        if np.any(bad):
            # landed on a critical point or on top of another estimate
            z[bad] += 1e-6 * (1.0 + np.abs(z[bad])) * np.exp(0.7j * iteration)
            continue
        z -= step
        if np.all(np.abs(step) <= 1e-14 * np.maximum(1.0, np.abs(z))):
            return z, True, iteration
    return z, False, max_iter


def _newton_polish(monic: np.ndarray, roots: np.ndarray, steps: int = 3) -> np.ndarray:
    deriv = P.polyder(monic)
    roots = roots.astype(complex)
    for _ in range(steps):
        with np.errstate(all="ignore"):
            step = P.polyval(roots, monic) / P.polyval(roots, deriv)
        candidate = roots - np.where(np.isfinite(step), step, 0.0)
        better = np.abs(P.polyval(candidate, monic)) < np.abs(P.polyval(roots, monic))
        roots = np.where(better, candidate, roots)
    return roots


def _inclusion_labels(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Component label of each estimate among overlapping inclusion discs.

    Each disc is centred on an estimate with radius n times its Weierstrass
    correction; a component of m overlapping discs holds exactly m roots.
    """
    n = z.size
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    with np.errstate(all="ignore"):
        log_radius = (
            math.log(n)
            + np.log(np.abs(P.polyval(z, monic)))
            - np.sum(np.log(np.abs(diff)), axis=1)
        )
        radii = np.exp(log_radius)
    radii = np.where(np.isfinite(radii), radii, 0.0)
    overlap = np.abs(z[:, None] - z[None, :]) <= radii[:, None] + radii[None, :]
    _, labels = connected_components(overlap, directed=False)
    return labels


def _polish_multiple(monic: np.ndarray, center: complex, multiplicity: int, steps: int = 8) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple"""
    f = P.polyder(monic, multiplicity - 1)
    df = P.polyder(f)
    for _ in range(steps):
        with np.errstate(all="ignore"):
            candidate = center - P.polyval(center, f) / P.polyval(center, df)
        if not np.isfinite(candidate) or abs(P.polyval(candidate, f)) >= abs(P.polyval(center, f)):
            break
        center = complex(candidate)
    return center


def _merge_clusters(core: np.ndarray, monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Replace each cluster of estimates by one polished root of its multiplicity"""
    labels = _inclusion_labels(monic, z)
    merged = []
    for label in np.unique(labels):
        members = z[labels == label]
        if members.size > 1:
            center = _polish_multiple(monic, complex(np.mean(members)), members.size)
            candidate = np.full(members.size, center, dtype=complex)
            allowed = max(settings.residual_tol, float(np.max(root_residuals(core, members))))
            if np.max(root_residuals(core, candidate)) <= allowed:
                members = candidate
        merged.append(members)
    return np.concatenate(merged)


def _refine(core: np.ndarray, monic: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, float]:
    roots = _merge_clusters(core, monic, _newton_polish(monic, z))
    return roots, float(np.max(root_residuals(core, roots)))


def _simultaneous_roots(core: np.ndarray) -> np.ndarray:
    """All roots of a polynomial with nonzero constant and leading terms"""
    n = core.size - 1
    if n == 0:
        return np.empty(0, dtype=complex)
    if n == 1:
        return np.array([-core[0] / core[1]], dtype=complex)

    monic = core / core[-1]
    rng = np.random.default_rng(settings.random_seed)
    best_roots, best_residual = None, np.inf

    for attempt in range(settings.aberth_restarts + 1):
        start = _initial_guesses(monic, rng if attempt else None)
        estimates, converged, iterations = _aberth(monic, start, settings.aberth_max_iter)
        roots, residual = _refine(core, monic, estimates)
        logger.debug(
            "aberth attempt %d: %d iterations, converged=%s, worst residual %.3e",
            attempt, iterations, converged, residual,
        )
        if residual < best_residual:
            best_roots, best_residual = roots, residual
        if residual <= settings.residual_tol:
            return roots

    logger.warning("Aberth iteration stalled (residual %.3e); falling back to companion matrix", best_residual)
    roots, residual = _refine(core, monic, P.polyroots(monic))
    if residual < best_residual:
        best_roots, best_residual = roots, residual
    if best_residual > settings.residual_tol:
        raise ConvergenceError("polynomial roots did not converge", best_residual)
    return best_roots


def poly_roots(p: ComplexPoly, nominal_degree: int) -> MajoranaRootSet:
    """Roots of p counted as a degree-``nominal_degree`` polynomial.

    Missing top-degree terms become roots at infinity: they are the zero roots
    of the reciprocal polynomial z'^N p(1/z'). Coefficients smaller than
    ``coefficient_zero_tol`` times the largest one count as structural zeros at
    either end of the coefficient list.
    """
    coeffs = p.as_array()
    threshold = settings.coefficient_zero_tol * float(np.max(np.abs(coeffs)))
    if nominal_degree < 1:
        raise InvalidInputError("nominal degree must be at least 1")
    if np.any(np.abs(coeffs[nominal_degree + 1:]) > threshold):
        raise InvalidInputError(
            f"polynomial degree {p.degree} exceeds nominal degree {nominal_degree}"
        )

    padded = np.zeros(nominal_degree + 1, dtype=complex)
    head = coeffs[: nominal_degree + 1]
    padded[: head.size] = head

    reciprocal = padded[::-1]
    infinity_count = _zero_root_multiplicity(reciprocal, threshold)
    zero_count = _zero_root_multiplicity(padded, threshold)
    core = padded[zero_count: nominal_degree + 1 - infinity_count]

    finite = np.concatenate([np.zeros(zero_count, dtype=complex), _simultaneous_roots(core)])
    return MajoranaRootSet(tuple(finite), infinity_count)


def hermitian_eig4(H) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian 4x4 matrix"""
    H = np.asarray(H, dtype=complex)
    if H.shape != (4, 4):
        raise InvalidInputError(f"expected a 4x4 matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise InvalidInputError("matrix has non-finite entries")
    asymmetry = float(np.max(np.abs(H - H.conj().T)))
    if asymmetry > 1e-12 * max(1.0, float(np.max(np.abs(H)))):
        raise InvalidInputError(f"matrix is not Hermitian (deviation {asymmetry:.3e})")
    values, vectors = np.linalg.eigh(0.5 * (H + H.conj().T))
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


@dataclass(frozen=True, eq=False)
class EigenGroup:
    """Eigenvalue cluster with a Euclidean-orthonormal basis of its eigenspace"""

    eigenvalue: float
    indices: Tuple[int, ...]
    basis: np.ndarray

    @property
    def algebraic_multiplicity(self) -> int:
        return len(self.indices)

    @property
    def geometric_multiplicity(self) -> int:
        return int(self.basis.shape[1])

    @property
    def defective(self) -> bool:
        return self.geometric_multiplicity < self.algebraic_multiplicity


@dataclass(frozen=True, eq=False)
class EigenSystem4:
    """Real spectrum of a real 4x4 matrix, grouped by degeneracy"""

    eigenvalues: np.ndarray
    groups: Tuple[EigenGroup, ...]

    @property
    def degeneracy_groups(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(g.indices for g in self.groups)

    @property
    def eigenvectors(self) -> np.ndarray:
        return np.hstack([g.basis for g in self.groups])

    @property
    def defective(self) -> bool:
        return any(g.defective for g in self.groups)

    def pairs(self) -> Iterator[Tuple[float, np.ndarray]]:
        for group in self.groups:
            for column in group.basis.T:
                yield group.eigenvalue, column


def _diameter(values: np.ndarray) -> float:
    return float(np.max(np.abs(values[:, None] - values[None, :]))) if values.size > 1 else 0.0


def _cluster(M: np.ndarray, values: np.ndarray, base: float, norm: float) -> List[List[int]]:
    """Group eigenvalues into degenerate clusters, largest clusters first.

    A k-fold eigenvalue, defective or not, splits by up to about
    eps^(1/k)*||M|| in floating point, so the allowance grows with k. A
    cluster wider than ``base`` must still have an eigenvector at its mean.
    """
    null_floor = 10.0 * math.sqrt(_EPS) * max(norm, _TINY)

    def has_eigenvector(combo) -> bool:
        mean = np.mean(values[list(combo)]).real
        return np.linalg.svd(M - mean * np.eye(4), compute_uv=False)[-1] <= null_floor

    remaining = set(range(values.size))
    clusters: List[List[int]] = []
    for k in range(values.size, 1, -1):
        allowance = max(base, 10.0 * _EPS ** (1.0 / k) * norm)
        candidates = sorted(
            itertools.combinations(sorted(remaining), k),
            key=lambda combo: _diameter(values[list(combo)]),
        )
        for combo in candidates:
            if not remaining.issuperset(combo):
                continue
            spread = _diameter(values[list(combo)])
            if spread <= base or (spread <= allowance and has_eigenvector(combo)):
                clusters.append(list(combo))
                remaining.difference_update(combo)
    clusters.extend([i] for i in sorted(remaining))
    return clusters


def real_eig4(M) -> EigenSystem4:
    """Eigen-decomposition of a real 4x4 matrix with a real spectrum.

    Eigenvalues closer than ``degeneracy_tol`` times the spectral radius are
    grouped, and so are k-fold clusters within the eps^(1/k)*||M|| spread a
    Jordan block leaves behind. Defective groups keep their (smaller)
    eigenspace and are flagged, never padded.
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (4, 4):
        raise InvalidInputError(f"expected a 4x4 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")

    norm = float(np.linalg.norm(M))
    raw = np.linalg.eigvals(M)
    radius = float(np.max(np.abs(raw)))
    clusters = _cluster(M, raw, max(settings.degeneracy_tol * radius, _TINY), norm)

    means = []
    for members in clusters:
        mean = complex(np.mean(raw[members]))
        if abs(mean.imag) > settings.imag_tol * max(1.0, norm):
            raise NonPhysicalSpectrumError(
                f"complex eigenvalue pair {mean.real:.6g} ± {abs(mean.imag):.3g}i"
            )
        means.append(mean.real)
    order = np.argsort(means)[::-1]

    eigenvalues = np.empty(4)
    groups = []
    position = 0
    for idx in order:
        members = clusters[idx]
        value = means[idx]
        size = len(members)
        indices = tuple(range(position, position + size))
        eigenvalues[position: position + size] = value
        position += size

        null_threshold = 10.0 * math.sqrt(_EPS) * max(norm, _TINY)
        _, singular, vh = np.linalg.svd(M - value * np.eye(4))
        rank_deficit = int(np.sum(singular <= null_threshold))
        k = min(max(rank_deficit, 1), size)
        basis = vh[-k:].T.copy()
        residual = float(np.max(np.linalg.norm(M @ basis - value * basis, axis=0)))
        if residual > settings.validation_tol * max(norm, 1.0):
            raise ConvergenceError("eigenvector residual above tolerance", residual)
        groups.append(EigenGroup(value, indices, basis))

    system = EigenSystem4(eigenvalues, tuple(groups))
    logger.debug(
        "real_eig4: eigenvalues %s, groups %s, defective=%s",
        np.array2string(eigenvalues, precision=6), system.degeneracy_groups, system.defective,
    )
    return system
