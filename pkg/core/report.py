"""Report models serialized by the command line"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# (real, imag)
ComplexPair = Tuple[float, float]


class SpinorOrientation(BaseModel):
    alpha: float
    beta: float
    bloch: List[float]


class CanonicalSummary(BaseModel):
    """Lorentz canonical form and the ellipsoid it describes"""

    type: Literal["I", "II"]
    g_omega_eigenvalues: List[float]
    x0: List[float]
    x0_minkowski_norm: float
    semiaxes: List[float] = Field(description="sorted descending")
    oriented_semiaxes: List[float] = Field(description="extents along x, y, z")
    center: List[float]
    volume_fraction: float
    sign: Optional[int] = None
    a0: Optional[float] = None
    a1: Optional[float] = None
    phi0: Optional[float] = None
    structure_residual: Optional[float] = None


class AnalysisReport(BaseModel):
    """Everything computed for one state"""

    model_config = ConfigDict(title="AnalysisReport")

    spec: str
    n_qubits: int
    dicke: List[ComplexPair]
    roots: List[ComplexPair]
    infinity_count: int
    degeneracy_pattern: List[int]
    spinors: List[SpinorOrientation]
    concurrence: float
    r_eigenvalues: List[float]
    det_rho1: float
    tangle: Optional[float] = None
    ckw_residual: Optional[float] = None
    bloch: List[float]
    real_rep: List[List[float]]
    det_lambda: float
    canonical: CanonicalSummary
    volume: float
    volume_lhs: float
    monogamy_bound: float
    monogamy_satisfied: bool


class SweepRow(BaseModel):
    n: int = Field(serialization_alias="N")
    det_lambda: float
    r: float
    v: float
    lhs: float


class ThetaSweepRow(BaseModel):
    theta: float
    concurrence: float
    tangle: float
    det_lambda: float
    r: float
    v: float
    lhs: float


class MeshSidecar(BaseModel):
    state: str
    n: int
    type: Literal["I", "II"]
    semiaxes: List[float] = Field(description="oriented, along x, y, z")
    canonical_semiaxes: List[float]
    center: List[float]
    n_azimuth: int
    n_polar: int


class ConversionReport(BaseModel):
    """Identical local operation turning one 3-qubit state into another"""

    source: str
    target: str
    source_roots: List[Optional[ComplexPair]] = Field(description="ordered; null is infinity")
    target_roots: List[Optional[ComplexPair]]
    matrix: List[List[ComplexPair]] = Field(description="det 1, rows of A")
    fidelity: float


class GoldenCheckResult(BaseModel):
    name: str
    expected: float
    computed: float
    tolerance: float
    passed: bool


class SelftestReport(BaseModel):
    checks: List[GoldenCheckResult]
    passed: int
    failed: int
    ok: bool
