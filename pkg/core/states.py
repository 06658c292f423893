"""Symmetric N-qubit states in the Dicke basis, named families and the state-spec grammar"""
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from config.settings import settings
from core.errors import InvalidInputError, SizeError, SpecParseError
from core.numerics import ExtendedComplex, binomial_row

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-10


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    """Make the first non-negligible entry real and positive"""
    scale = float(np.max(np.abs(vec)))
    for value in vec:
        if abs(value) > 1e-12 * scale:
            return vec * (np.conj(value) / abs(value))
    return vec


def _normalized(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0 or not np.isfinite(norm):
        raise InvalidInputError("state vector has zero or non-finite norm")
    return _fix_global_phase(vec / norm)


class StateKind(str, Enum):
    """Named families of symmetric states"""

    GHZ = "ghz"
    W = "w"
    WBAR = "wbar"
    WWBAR = "wwbar"
    GHZ_GEN = "ghz-gen"
    WWBAR_GEN = "wwbar-gen"
    DICKE = "dicke"


@dataclass(frozen=True, eq=False)
class SymmetricState:
    """Unit-norm Dicke coefficients d_0..d_N; d_k multiplies the Dicke vector with k zeros"""

    dicke: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.dicke, dtype=complex).ravel()
        if arr.size < 2:
            raise InvalidInputError("a symmetric state needs at least one qubit")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("Dicke coefficients must be finite")
        if abs(float(np.vdot(arr, arr).real) - 1.0) > _NORM_TOL:
            raise InvalidInputError("Dicke coefficients are not normalized")
        arr = _fix_global_phase(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "dicke", arr)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[complex]) -> "SymmetricState":
        """Normalize arbitrary coefficients into a state"""
        return cls(_normalized(np.asarray(coeffs, dtype=complex).ravel()))

    @property
    def n_qubits(self) -> int:
        return self.dicke.size - 1

    def overlap(self, other: "SymmetricState") -> complex:
        if other.n_qubits != self.n_qubits:
            raise InvalidInputError("states have different qubit counts")
        return complex(np.vdot(self.dicke, other.dicke))

    def fidelity(self, other: "SymmetricState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True, eq=False)
class QubitRegisterState:
    """Unit vector of 2^N amplitudes; qubit 0 is the most significant bit"""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = int(round(math.log2(arr.size))) if arr.size else 0
        if arr.size < 2 or 2 ** n != arr.size:
            raise InvalidInputError(f"register length {arr.size} is not a power of two")
        if abs(float(np.vdot(arr, arr).real) - 1.0) > _NORM_TOL:
            raise InvalidInputError("register state is not normalized")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_amplitudes(cls, amps: Sequence[complex]) -> "QubitRegisterState":
        return cls(_normalized(np.asarray(amps, dtype=complex).ravel()))

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.amplitudes.size)))

    def permuted(self, order: Sequence[int]) -> "QubitRegisterState":
        """Register with qubit ``order[j]`` moved to position j"""
        n = self.n_qubits
        if sorted(order) != list(range(n)):
            raise InvalidInputError("order must be a permutation of the qubits")
        tensor = self.amplitudes.reshape((2,) * n).transpose(order)
        return QubitRegisterState(tensor.reshape(-1).copy())


def make_state(kind, n: int, theta: Optional[float] = None, k: Optional[int] = None) -> SymmetricState:
    """Build a named symmetric state"""
    try:
        kind = StateKind(kind)
    except ValueError:
        raise InvalidInputError(f"unknown state family {kind!r}") from None
    if n < 2:
        raise InvalidInputError("states need N >= 2")
    if kind in (StateKind.WWBAR, StateKind.WWBAR_GEN) and n < 3:
        raise InvalidInputError(f"{kind.value} needs N >= 3")

    d = np.zeros(n + 1, dtype=complex)
    if kind in (StateKind.GHZ_GEN, StateKind.WWBAR_GEN):
        if theta is None or not (0.0 < theta < math.pi):
            raise InvalidInputError("theta must lie in the open interval (0, pi)")
        low, high = (0, n) if kind is StateKind.GHZ_GEN else (1, n - 1)
        d[low] = math.sin(theta / 2)
        d[high] = math.cos(theta / 2)
    elif kind is StateKind.GHZ:
        d[0] = d[n] = 1 / math.sqrt(2)
    elif kind is StateKind.W:
        d[n - 1] = 1.0
    elif kind is StateKind.WBAR:
        d[1] = 1.0
    elif kind is StateKind.WWBAR:
        d[1] = d[n - 1] = 1 / math.sqrt(2)
    else:
        if k is None or not (0 <= k <= n):
            raise InvalidInputError(f"Dicke index must lie in 0..{n}")
        d[k] = 1.0
    return SymmetricState.from_coefficients(d)


def to_register(state: SymmetricState) -> QubitRegisterState:
    """Expand into the 2^N computational basis"""
    n = state.n_qubits
    if n > settings.register_max_qubits:
        raise SizeError(f"register expansion is limited to {settings.register_max_qubits} qubits")
    index = np.arange(2 ** n)
    ones = np.zeros_like(index)
    for bit in range(n):
        ones += (index >> bit) & 1
    zeros = n - ones
    amps = state.dicke[zeros] / np.sqrt(binomial_row(n))[zeros]
    return QubitRegisterState(amps)


def fidelity(a: SymmetricState, b: SymmetricState) -> float:
    """|<a|b>|^2"""
    return a.fidelity(b)


_PI_ANGLE = re.compile(r"^(?P<num>\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(?P<den>\d+(?:\.\d*)?))?$")


def parse_angle(token: str) -> float:
    """Float or a multiple of pi such as ``pi/3``, ``2pi/3``, ``0.5*pi``"""
    token = token.strip().lower()
    match = _PI_ANGLE.match(token)
    if match:
        num = float(match.group("num")) if match.group("num") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0:
            raise SpecParseError(f"bad angle {token!r}")
        return num * math.pi / den
    try:
        return float(token)
    except ValueError:
        raise SpecParseError(f"bad angle {token!r}") from None


def parse_root(token: str) -> ExtendedComplex:
    """Complex literal (``1+2i`` or ``1+2j``) or ``inf``"""
    token = token.strip().lower().replace(" ", "")
    if token in ("inf", "infinity", "∞"):
        return ExtendedComplex.infinity()
    try:
        value = complex(token.replace("i", "j"))
    except ValueError:
        raise SpecParseError(f"bad root {token!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise SpecParseError(f"bad root {token!r}")
    return ExtendedComplex.finite(value)


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecParseError(f"bad {what} {token!r}") from None


def parse_state_spec(text: str) -> SymmetricState:
    """Parse ``family:N[:param]`` or ``roots:[z1,...,inf]`` into a state"""
    text = text.strip()
    if text.lower().startswith("roots:"):
        body = text[len("roots:"):].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise SpecParseError("roots must be written as roots:[z1,z2,...]")
        tokens = [t for t in body[1:-1].split(",") if t.strip()]
        if len(tokens) < 2:
            raise SpecParseError("roots spec needs at least two roots")
        points: List[ExtendedComplex] = [parse_root(t) for t in tokens]

        from core.majorana import dicke_from_points

        return dicke_from_points(points)

    parts = text.split(":")
    name = parts[0].lower()
    try:
        kind = StateKind(name)
    except ValueError:
        raise SpecParseError(f"unknown state family {name!r}") from None

    expected = 3 if kind in (StateKind.GHZ_GEN, StateKind.WWBAR_GEN, StateKind.DICKE) else 2
    if len(parts) != expected:
        raise SpecParseError(f"{name} takes {expected - 1} argument(s), got {len(parts) - 1}")

    n = _parse_int(parts[1], "qubit count")
    if kind is StateKind.DICKE:
        return make_state(kind, n, k=_parse_int(parts[2], "Dicke index"))
    if expected == 3:
        return make_state(kind, n, theta=parse_angle(parts[2]))
    return make_state(kind, n)
