"""One- and two-qubit marginals of symmetric states"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config.settings import settings
from core.errors import InvalidInputError, NumericalValidityError
from core.numerics import hermitian_eig4, log_binomial_row
from core.states import QubitRegisterState, SymmetricState

logger = logging.getLogger(__name__)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _check_density(matrix: np.ndarray, eigenvalues: np.ndarray, tol: float, label: str) -> None:
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > tol:
        raise NumericalValidityError(f"{label} is not Hermitian (deviation {deviation:.3e})")
    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > tol:
        raise NumericalValidityError(f"{label} has trace {trace:.12g}")
    if float(np.min(eigenvalues)) < -tol:
        raise NumericalValidityError(f"{label} has eigenvalue {np.min(eigenvalues):.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix1:
    """Single-qubit density matrix"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidInputError(f"expected a 2x2 matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([np.real(np.trace(self.matrix @ s)) for s in PAULI[1:]])

    @property
    def determinant(self) -> float:
        return float(np.real(np.linalg.det(self.matrix)))

    def validate(self, tol: Optional[float] = None) -> None:
        tol = settings.validation_tol if tol is None else tol
        _check_density(self.matrix, np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T)), tol, "rho1")
        if np.linalg.norm(self.bloch) > 1.0 + tol:
            raise NumericalValidityError("single-qubit Bloch vector lies outside the ball")


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """Two-qubit density matrix in the ordered basis 00, 01, 10, 11"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidInputError(f"expected a 4x4 matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    def validate(self, tol: Optional[float] = None) -> None:
        tol = settings.validation_tol if tol is None else tol
        values, _ = hermitian_eig4(0.5 * (self.matrix + self.matrix.conj().T))
        _check_density(self.matrix, values, tol, "rho2")

    def trace_out(self, slot: int) -> DensityMatrix1:
        """Trace out qubit ``slot`` (0 or 1)"""
        tensor = self.matrix.reshape(2, 2, 2, 2)
        if slot == 1:
            return DensityMatrix1(np.einsum("ijkj->ik", tensor))
        if slot == 0:
            return DensityMatrix1(np.einsum("ijil->jl", tensor))
        raise InvalidInputError("slot must be 0 or 1")

    def swapped(self) -> "DensityMatrix2":
        tensor = self.matrix.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2)
        return DensityMatrix2(tensor.reshape(4, 4))


def _marginal(state: SymmetricState, kept: int) -> np.ndarray:
    """Reduced state of ``kept`` qubits via Dicke-index contraction.

    Entry (p, p') sums over m zeros among the traced qubits, weighted by
    C(N-kept, m) / sqrt(C(N, z_p + m) C(N, z_p' + m)), where z_p is the number
    of zeros in the kept basis string p.
    """
    n = state.n_qubits
    traced = n - kept
    d = state.dicke
    log_full = log_binomial_row(n)
    log_traced = log_binomial_row(traced)
    m = np.arange(traced + 1)
    dim = 2 ** kept
    zeros_in = [kept - bin(p).count("1") for p in range(dim)]

    rho = np.zeros((dim, dim), dtype=complex)
    for p in range(dim):
        kp = zeros_in[p] + m
        for q in range(p, dim):
            kq = zeros_in[q] + m
            weight = np.exp(log_traced - 0.5 * (log_full[kp] + log_full[kq]))
            rho[p, q] = np.sum(weight * d[kp] * np.conj(d[kq]))
            rho[q, p] = np.conj(rho[p, q])
    return rho


def reduce_two(state: SymmetricState) -> DensityMatrix2:
    """Two-qubit marginal; identical for every qubit pair"""
    if state.n_qubits < 2:
        raise InvalidInputError("two-qubit marginal needs N >= 2")
    return DensityMatrix2(_marginal(state, 2))


def reduce_one(state: SymmetricState) -> DensityMatrix1:
    """Single-qubit marginal"""
    return DensityMatrix1(_marginal(state, 1))


def partial_trace_register(reg: QubitRegisterState, keep: Sequence[int]) -> np.ndarray:
    """Density matrix of the kept qubits, in the order given"""
    keep = [int(k) for k in keep]
    n = reg.n_qubits
    if not 1 <= len(keep) <= 3:
        raise InvalidInputError("keep between one and three qubits")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise InvalidInputError(f"invalid qubit indices {keep} for {n} qubits")
    psi = reg.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(psi, keep, list(range(len(keep)))).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T
