"""Real representation, Lorentz canonical forms, steering ellipsoids and volume monogamy"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from config.settings import settings
from core.errors import (
    ConvergenceError,
    DegenerateSteeringError,
    InvalidInputError,
    NonPhysicalSpectrumError,
    SingularVolumeError,
)
from core.numerics import G, EigenSystem4, minkowski_norm, real_eig4
from core.reductions import PAULI, DensityMatrix2

logger = logging.getLogger(__name__)

MONOGAMY_BOUND = 0.5

_TINY = 1e-300


@dataclass(frozen=True, eq=False)
class RealRep:
    """Lambda_{mu nu} = Tr(rho sigma_mu x sigma_nu); the first index belongs to the steered qubit"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise InvalidInputError(f"expected a 4x4 matrix, got shape {m.shape}")
        if abs(m[0, 0] - 1.0) > settings.validation_tol:
            raise InvalidInputError(f"Lambda_00 must be 1, got {m[0, 0]:.12g}")
        m[0, 0] = 1.0
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def alice_bloch(self) -> np.ndarray:
        """Bloch vector of the first qubit"""
        return self.matrix[1:, 0].copy()

    @property
    def bob_bloch(self) -> np.ndarray:
        """Bloch vector of the measured qubit"""
        return self.matrix[0, 1:].copy()

    @property
    def correlations(self) -> np.ndarray:
        return self.matrix[1:, 1:].copy()

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def to_density(self) -> DensityMatrix2:
        rho = np.zeros((4, 4), dtype=complex)
        for mu in range(4):
            for nu in range(4):
                rho += self.matrix[mu, nu] * np.kron(PAULI[mu], PAULI[nu])
        return DensityMatrix2(rho / 4.0)


def real_rep(rho: DensityMatrix2) -> RealRep:
    """Real 4x4 representation of a two-qubit state"""
    m = np.array([
        [np.real(np.trace(rho.matrix @ np.kron(PAULI[mu], PAULI[nu]))) for nu in range(4)]
        for mu in range(4)
    ])
    if m[0, 0] <= 0:
        raise InvalidInputError("density matrix has non-positive trace")
    return RealRep(m / m[0, 0])


def omega(lam: RealRep) -> Tuple[np.ndarray, np.ndarray]:
    """Omega = Lambda G Lambda^T and G Omega"""
    om = lam.matrix @ G @ lam.matrix.T
    om = 0.5 * (om + om.T)
    return om, G @ om


def rotation4(rotvec: Sequence[float]) -> np.ndarray:
    """Spatial rotation embedded in a 4x4 Lorentz matrix"""
    out = np.eye(4)
    out[1:, 1:] = Rotation.from_rotvec(np.asarray(rotvec, dtype=float)).as_matrix()
    return out


def boost4(rapidity: Sequence[float]) -> np.ndarray:
    """Pure boost with rapidity vector zeta; velocity tanh|zeta| along zeta"""
    zeta = np.asarray(rapidity, dtype=float)
    size = float(np.linalg.norm(zeta))
    if size == 0.0:
        return np.eye(4)
    n = zeta / size
    gamma, gamma_beta = math.cosh(size), math.sinh(size)
    out = np.eye(4)
    out[0, 0] = gamma
    out[0, 1:] = out[1:, 0] = gamma_beta * n
    out[1:, 1:] += (gamma - 1.0) * np.outer(n, n)
    return out


def lorentz(params: Sequence[float]) -> np.ndarray:
    """Proper orthochronous Lorentz matrix: rotation(params[:3]) after boost(params[3:])"""
    return rotation4(params[:3]) @ boost4(params[3:])


def rest_frame_boost(velocity: np.ndarray) -> np.ndarray:
    """Boost sending (1, v) to a multiple of (1, 0, 0, 0)"""
    speed = float(np.linalg.norm(velocity))
    if speed >= 1.0:
        raise NonPhysicalSpectrumError("Bloch vector on or outside the sphere has no rest frame")
    if speed == 0.0:
        return np.eye(4)
    return boost4(-math.atanh(speed) * velocity / speed)


def _align_to_z(vector: np.ndarray) -> np.ndarray:
    size = float(np.linalg.norm(vector))
    if size <= 1e-14:
        return np.eye(4)
    v = vector / size
    axis = np.cross(v, [0.0, 0.0, 1.0])
    sin_angle = float(np.linalg.norm(axis))
    if sin_angle <= 1e-14:
        return np.eye(4) if v[2] > 0 else rotation4([math.pi, 0.0, 0.0])
    angle = math.atan2(sin_angle, float(v[2]))
    return rotation4(axis / sin_angle * angle)


def type_two_template(a0: float, a1: float) -> np.ndarray:
    """Canonical Lambda of a Type II ellipsoid touching the north pole"""
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, a1, 0.0, 0.0],
        [0.0, 0.0, -a1, 0.0],
        [1.0 - a0, 0.0, 0.0, a0],
    ])


def lorentz_defect(m: np.ndarray) -> float:
    """||M^T G M - G||, zero exactly for Lorentz matrices"""
    return float(np.linalg.norm(m.T @ G @ m - G))


def _null_frame(g_omega: np.ndarray, lam0: float, phi0: float, null: np.ndarray) -> Optional[np.ndarray]:
    """Lorentz frame (Y, E1, E2, Z) in which G Omega is phi0 times the Type II template's.

    Y is timelike with A Y = lam0 Y + (phi0 - lam0) N and <Y, N> = 1, where N
    is the rescaled null eigenvector and Z = Y - N. E1, E2 span the transverse
    eigenspace.
    """
    gap = phi0 - lam0
    if gap <= 0:
        return None
    chain, *_ = np.linalg.lstsq(g_omega - lam0 * np.eye(4), null, rcond=1e-5)
    pairing = float(chain @ G @ null)
    if pairing <= 0:
        return None
    kappa = 1.0 / math.sqrt(gap * pairing)
    alpha = gap * kappa
    beta = (1.0 - alpha ** 2 * minkowski_norm(chain)) / (2.0 * alpha * pairing)
    y = alpha * chain + beta * null
    z = y - kappa * null

    _, _, vh = np.linalg.svd(np.vstack([G @ y, G @ z]))
    transverse = vh[2:].T
    gram = -(transverse.T @ G @ transverse)
    w, v = np.linalg.eigh(0.5 * (gram + gram.T))
    if w[0] <= 0:
        return None
    transverse = transverse @ v / np.sqrt(w)

    frame = np.column_stack([y, transverse, z])
    if np.linalg.det(frame) < 0:
        frame[:, 2] *= -1.0
    return frame


def _procrustes_start(lam: np.ndarray, target: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Bob's rest frame, Alice's center on +z, then the best rotation of Bob's axes"""
    lb = rest_frame_boost(lam[0, 1:] / lam[0, 0])
    moved = lam @ lb.T
    la = _align_to_z(moved[1:, 0] / moved[0, 0])
    block = (la @ moved)[1:, 1:]
    u, _, vt = np.linalg.svd(block.T @ target[1:, 1:])
    d = np.sign(np.linalg.det(u @ vt)) or 1.0
    turn = np.eye(4)
    turn[1:, 1:] = (u @ np.diag([1.0, 1.0, d]) @ vt).T
    return la, turn @ lb


def _search_type_two(lam: np.ndarray, g_omega: np.ndarray, target: np.ndarray, null: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Find Lorentz L_A, L_B with L_A Lambda L_B^T = target.

    The null-eigenvector frame of G Omega gives L_A directly and L_B follows
    from a linear solve. When that frame is unavailable or inaccurate, a
    Procrustes start in Bob's rest frame is refined over all twelve Lorentz
    parameters.
    """
    scale = float(target[0, 0])
    phi0 = scale ** 2
    lam0 = phi0 * float(target[3, 3])

    def miss(la: np.ndarray, lb: np.ndarray) -> float:
        fit = float(np.linalg.norm(la @ lam @ lb.T - target)) / scale
        return max(fit, lorentz_defect(la), lorentz_defect(lb))

    frame = _null_frame(g_omega, lam0, phi0, null)
    if frame is not None:
        la = frame.T
        lb = np.linalg.solve(la @ lam, target).T
        residual = miss(la, lb)
        logger.debug("type II null frame: residual %.3e", residual)
        if residual <= settings.type2_residual_tol:
            return la, lb, residual

    la0, lb0 = _procrustes_start(lam, target)

    def fun(x):
        return ((lorentz(x[:6]) @ la0 @ lam @ (lorentz(x[6:]) @ lb0).T - target) / scale).ravel()

    solution = least_squares(
        fun, np.zeros(12), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000
    )
    la, lb = lorentz(solution.x[:6]) @ la0, lorentz(solution.x[6:]) @ lb0
    residual = miss(la, lb)
    logger.debug("type II refinement: %.3e -> %.3e", float(np.linalg.norm(fun(np.zeros(12)))), residual)
    return la, lb, residual


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Lorentz canonical form of Lambda.

    ``semiaxes`` are sorted descending; ``oriented_semiaxes`` are the extents
    along x, y, z in the frame where the state's symmetry axes are kept.
    """

    kind: str
    eigenvalues: np.ndarray
    x0: np.ndarray
    x0_norm: float
    semiaxes: Tuple[float, float, float]
    oriented_semiaxes: Tuple[float, float, float]
    sign: int = 1
    sign_axis: int = 2
    a0: Optional[float] = None
    a1: Optional[float] = None
    phi0: Optional[float] = None
    tetrad: Optional[np.ndarray] = None
    transforms: Optional[Tuple[np.ndarray, np.ndarray]] = None
    structure_residual: Optional[float] = None

    @property
    def is_type_one(self) -> bool:
        return self.kind == "I"

    @property
    def matrix(self) -> np.ndarray:
        """Canonical Lambda in the oriented frame"""
        if self.kind == "II":
            return type_two_template(self.a0, self.a1)
        diagonal = np.array([1.0, *self.oriented_semiaxes])
        diagonal[1 + self.sign_axis] *= self.sign
        return np.diag(diagonal)


def _most_timelike(basis: np.ndarray) -> Tuple[np.ndarray, float]:
    """Unit vector of the span maximizing x^T G x, future pointing"""
    gram = basis.T @ G @ basis
    mu, vecs = np.linalg.eigh(0.5 * (gram + gram.T))
    x = basis @ vecs[:, -1]
    x /= np.linalg.norm(x)
    if x[0] < 0:
        x = -x
    return x, float(minkowski_norm(x))


def _minkowski_tetrad(system: EigenSystem4, x0: np.ndarray) -> Optional[np.ndarray]:
    """G-orthonormal eigenvector frame starting from the timelike x0"""
    vectors = [x0 / math.sqrt(minkowski_norm(x0))]
    signs = [1.0]
    for _, column in system.pairs():
        if len(vectors) == 4:
            break
        v = column.astype(float).copy()
        for u, s in zip(vectors, signs):
            v -= (u @ G @ v) * s * u
        size = float(np.linalg.norm(v))
        if size <= 1e-6:
            continue
        norm = minkowski_norm(v)
        if abs(norm) <= settings.null_tol * size ** 2:
            continue
        vectors.append(v / math.sqrt(abs(norm)))
        signs.append(math.copysign(1.0, norm))
    if len(vectors) < 4:
        return None
    frame = np.column_stack(vectors)
    if not np.allclose(frame.T @ G @ frame, G, atol=1e-6):
        return None
    return frame


def _orient(tetrad: Optional[np.ndarray], values: np.ndarray, axes: np.ndarray) -> Tuple[Tuple[float, float, float], int]:
    """Assign semiaxes to the Bloch axes their eigenvectors point along"""
    if tetrad is None:
        return tuple(float(a) for a in axes), 2

    groups: List[List[int]] = []
    tol = settings.degeneracy_tol * max(abs(values[0]), _TINY)
    for j in range(3):
        if groups and abs(values[1 + j] - values[1 + groups[-1][0]]) <= tol:
            groups[-1].append(j)
        else:
            groups.append([j])

    spatial = tetrad[1:, 1:]
    oriented = np.zeros(3)
    free = [0, 1, 2]
    sign_axis = 2
    for members in sorted(groups, key=len):
        q, _ = np.linalg.qr(spatial[:, members])
        energy = np.sum(q ** 2, axis=1)
        chosen = sorted(free, key=lambda ax: -energy[ax])[: len(members)]
        for ax in chosen:
            oriented[ax] = axes[members[0]]
            free.remove(ax)
        if 2 in members:
            sign_axis = chosen[-1]
    return tuple(float(a) for a in oriented), sign_axis


def canonical_form(lam: RealRep) -> CanonicalForm:
    """Classify Lambda as Type I (timelike X0) or Type II (null X0) and canonicalize"""
    _, g_omega = omega(lam)
    system = real_eig4(g_omega)
    values = system.eigenvalues.copy()
    scale = max(float(np.max(np.abs(values))), _TINY)
    if float(np.min(values)) < -settings.null_tol * scale:
        raise NonPhysicalSpectrumError(f"G Omega has negative eigenvalue {np.min(values):.3e}")
    values = np.clip(values, 0.0, None)

    if values[0] <= settings.volume_floor:
        logger.info("vanishing G Omega spectrum: ellipsoid collapses to a point")
        return CanonicalForm(
            kind="I", eigenvalues=values, x0=np.array([1.0, 0.0, 0.0, 0.0]), x0_norm=1.0,
            semiaxes=(0.0, 0.0, 0.0), oriented_semiaxes=(0.0, 0.0, 0.0),
        )

    top = system.groups[0]
    x0, x0_norm = _most_timelike(top.basis)
    logger.debug("top eigenvalue %.12g, multiplicity %d, X0 norm %.3e",
                 values[0], top.algebraic_multiplicity, x0_norm)

    if x0_norm > settings.null_tol:
        return _type_one(lam, system, values, x0, x0_norm)
    if x0_norm < -settings.null_tol:
        raise NonPhysicalSpectrumError("top eigenvector of G Omega is spacelike")
    if top.algebraic_multiplicity < 2:
        raise NonPhysicalSpectrumError("null X0 with a nondegenerate top eigenvalue")
    return _type_two(lam, g_omega, values, x0, x0_norm)


def _type_one(lam: RealRep, system: EigenSystem4, values: np.ndarray, x0: np.ndarray, x0_norm: float) -> CanonicalForm:
    axes = np.sqrt(values[1:] / values[0])
    det = lam.determinant
    sign = -1 if det < -settings.volume_floor else 1
    tetrad = _minkowski_tetrad(system, x0)
    oriented, sign_axis = _orient(tetrad, values, axes)
    return CanonicalForm(
        kind="I", eigenvalues=values, x0=x0, x0_norm=x0_norm,
        semiaxes=tuple(float(a) for a in axes), oriented_semiaxes=oriented,
        sign=sign, sign_axis=sign_axis, tetrad=tetrad,
    )


def _type_two(lam: RealRep, g_omega: np.ndarray, values: np.ndarray, x0: np.ndarray, x0_norm: float) -> CanonicalForm:
    # boosts along the null direction rescale phi0; fix it by Bob's marginal
    phi0 = 1.0 - float(np.dot(lam.bob_bloch, lam.bob_bloch))
    if phi0 <= settings.volume_floor:
        raise NonPhysicalSpectrumError("pure marginal on the measured qubit leaves no Type II frame")
    a0 = float(values[0] / phi0)
    a1 = float(math.sqrt(values[2] / phi0))
    target = math.sqrt(phi0) * type_two_template(a0, a1)

    la, lb, residual = _search_type_two(lam.matrix, g_omega, target, x0)
    transformed = la @ lam.matrix @ lb.T
    omega_tilde = transformed @ G @ transformed.T
    expected = target @ G @ target.T
    structure = max(residual, float(np.linalg.norm(omega_tilde - expected)) / phi0)
    if structure > settings.type2_residual_tol or la[0, 0] <= 0 or lb[0, 0] <= 0:
        raise ConvergenceError("Type II canonical search did not reach the template", structure)

    return CanonicalForm(
        kind="II", eigenvalues=values, x0=x0, x0_norm=x0_norm,
        semiaxes=tuple(sorted((a1, a1, a0), reverse=True)), oriented_semiaxes=(a1, a1, a0),
        a0=a0, a1=a1, phi0=phi0, transforms=(la, lb), structure_residual=structure,
    )


def _fibonacci_directions(count: int) -> np.ndarray:
    k = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * k / count)
    azimuth = math.pi * (1.0 + 5.0 ** 0.5) * k
    return np.column_stack([
        np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)
    ])


@dataclass(frozen=True)
class EllipsoidGeometry:
    """Canonical steering ellipsoid"""

    kind: str
    center: Tuple[float, float, float]
    semiaxes: Tuple[float, float, float]
    oriented_semiaxes: Tuple[float, float, float]
    volume_fraction: float

    @property
    def degenerate(self) -> bool:
        return min(self.semiaxes) <= settings.volume_floor

    def surface(self, directions: np.ndarray) -> np.ndarray:
        return np.asarray(self.center) + np.asarray(directions) * np.asarray(self.oriented_semiaxes)

    def is_contained(self, samples: int = 500, tol: float = 1e-9) -> bool:
        points = self.surface(_fibonacci_directions(samples))
        return bool(np.max(np.linalg.norm(points, axis=1)) <= 1.0 + tol)


def ellipsoid(cf: CanonicalForm) -> EllipsoidGeometry:
    """Center, semiaxes and volume fraction of the canonical ellipsoid"""
    if cf.kind == "II":
        center = (0.0, 0.0, 1.0 - cf.a0)
    else:
        center = (0.0, 0.0, 0.0)
    return EllipsoidGeometry(
        kind=cf.kind,
        center=center,
        semiaxes=cf.semiaxes,
        oriented_semiaxes=cf.oriented_semiaxes,
        volume_fraction=float(np.prod(cf.semiaxes)),
    )


def steer(lam: RealRep, q: Sequence[float]) -> np.ndarray:
    """Steered Bloch vector when the measured qubit projects onto direction q"""
    q = np.asarray(q, dtype=float)
    if q.shape != (3,) or abs(float(np.linalg.norm(q)) - 1.0) > 1e-10:
        raise InvalidInputError("measurement direction must be a unit 3-vector")
    out = lam.matrix @ np.concatenate(([1.0], q))
    if out[0] <= settings.probability_floor:
        raise DegenerateSteeringError(f"outcome probability {out[0]:.3e} vanishes")
    return out[1:] / out[0]


@dataclass(frozen=True)
class MonogamyReport:
    v: float
    lhs: float
    bound: float
    satisfied: bool


def volume_monogamy(lam: RealRep, r: Optional[Sequence[float]] = None) -> MonogamyReport:
    """Normalized ellipsoid volume |det Lambda| / (1 - r^2)^2 and its 2/3 power"""
    r = lam.bob_bloch if r is None else np.asarray(r, dtype=float)
    r2 = float(np.dot(r, r))
    if r2 > 1.0 + settings.validation_tol:
        raise InvalidInputError(f"|r|^2 = {r2:.12g} exceeds 1")
    det = abs(lam.determinant)
    gap = 1.0 - r2
    if gap < settings.volume_floor:
        if det >= settings.volume_floor:
            raise SingularVolumeError(f"pure marginal with det Lambda = {det:.3e}")
        v = 0.0
    else:
        v = det / gap ** 2
    lhs = v ** (2.0 / 3.0)
    return MonogamyReport(v=v, lhs=lhs, bound=MONOGAMY_BOUND, satisfied=lhs <= MONOGAMY_BOUND + 1e-12)


def mesh_points(cf: CanonicalForm, n_azimuth: Optional[int] = None, n_polar: Optional[int] = None) -> List[Tuple[int, int, float, float, float]]:
    """Steered points over a grid of measurement directions, using the canonical Lambda"""
    n_azimuth = settings.mesh_azimuth if n_azimuth is None else n_azimuth
    n_polar = settings.mesh_polar if n_polar is None else n_polar
    if n_azimuth < 1 or n_polar < 2:
        raise InvalidInputError("mesh needs at least one azimuth and two polar samples")
    canonical = RealRep(cf.matrix)
    rows = []
    for u in range(n_azimuth):
        phi = 2.0 * math.pi * u / n_azimuth
        for v in range(n_polar):
            theta = math.pi * v / (n_polar - 1)
            q = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
            p = steer(canonical, q)
            rows.append((u, v, float(p[0]), float(p[1]), float(p[2])))
    return rows
