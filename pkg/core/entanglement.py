"""Concurrence, the R-matrix spectrum and the N-tangle"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from core.errors import InvalidInputError, NumericalValidityError
from core.numerics import hermitian_eig4
from core.reductions import PAULI, DensityMatrix2, reduce_one, reduce_two
from core.states import SymmetricState

logger = logging.getLogger(__name__)

SIGMA_YY = np.kron(PAULI[2], PAULI[2])

# Negative eigenvalues above this are rounding; below it the input is broken
_NEGATIVE_LIMIT = -1e-6


@dataclass(frozen=True)
class TangleReport:
    """Entanglement summary of a symmetric state"""

    n_qubits: int
    concurrence: float
    r_eigs: Tuple[float, ...]
    det_rho1: float
    one_to_rest: float
    tau: float
    ckw_residual: Optional[float] = None


def spin_flip(rho: DensityMatrix2) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)"""
    return SIGMA_YY @ rho.matrix.conj() @ SIGMA_YY


def _snap(values: np.ndarray, label: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(values))))
    lowest = float(np.min(values))
    if lowest < _NEGATIVE_LIMIT * scale:
        raise NumericalValidityError(f"{label} has eigenvalue {lowest:.3e}")
    if lowest < -1e-9 * scale:
        logger.warning("%s eigenvalue %.3e clipped to zero", label, lowest)
    return np.where(values <= settings.spectrum_zero_tol * scale, 0.0, values)


def r_matrix_eigs(rho: DensityMatrix2) -> np.ndarray:
    """Eigenvalues of R = rho rho~, descending.

    They are computed from the Hermitian sqrt(rho) rho~ sqrt(rho), which has
    the same spectrum.
    """
    values, vectors = hermitian_eig4(0.5 * (rho.matrix + rho.matrix.conj().T))
    values = _snap(values, "rho2")
    sqrt_rho = vectors @ np.diag(np.sqrt(values)) @ vectors.conj().T
    similar = sqrt_rho @ spin_flip(rho) @ sqrt_rho
    eigs, _ = hermitian_eig4(0.5 * (similar + similar.conj().T))
    return _snap(eigs, "R")


def concurrence(rho: DensityMatrix2) -> Tuple[float, np.ndarray]:
    """Wootters concurrence and the R eigenvalues it was computed from"""
    eigs = r_matrix_eigs(rho)
    roots = np.sqrt(eigs)
    value = max(0.0, float(roots[0] - roots[1:].sum()))
    return value, eigs


def r_matrix_eigs_closed_form(n: int, family: str = "wwbar") -> Tuple[float, float, float, float]:
    """Closed-form sqrt(R) eigenvalues of the W-Wbar pair state for N > 4"""
    if family != "wwbar":
        raise InvalidInputError(f"no closed form for family {family!r}")
    if n < 5:
        raise InvalidInputError("closed form holds for N > 4")
    a = (n - 2) / (2 * n)
    return (a, a, 2 / n, 0.0)


def n_tangle(state: SymmetricState) -> TangleReport:
    """tau = 4 det(rho1) - (N - 1) C^2"""
    n = state.n_qubits
    if n < 3:
        raise InvalidInputError("the N-tangle needs N >= 3")
    c, eigs = concurrence(reduce_two(state))
    det1 = reduce_one(state).determinant
    tau = 4.0 * det1 - (n - 1) * c ** 2
    ckw = 4.0 * det1 - 2.0 * c ** 2 if n == 3 else None
    logger.debug("N=%d: C=%.12g det(rho1)=%.12g tau=%.12g", n, c, det1, tau)
    return TangleReport(
        n_qubits=n,
        concurrence=c,
        r_eigs=tuple(float(e) for e in eigs),
        det_rho1=det1,
        one_to_rest=float(2.0 * np.sqrt(max(det1, 0.0))),
        tau=tau,
        ckw_residual=ckw,
    )
