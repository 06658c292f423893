import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from config.settings import settings
from core.entanglement import concurrence, n_tangle
from core.errors import DomainError, InvalidInputError, NotDistinctSpinorsError, NumericalValidityError, SizeError
from core.locops import apply_identical_local, clockwise_order, moebius_from_triples
from core.majorana import degeneracy_pattern, roots_from_dicke, spinors_from_roots
from core.numerics import ExtendedComplex
from core.reductions import reduce_one, reduce_two
from core.report import (
    AnalysisReport,
    CanonicalSummary,
    ConversionReport,
    MeshSidecar,
    SpinorOrientation,
    SweepRow,
    ThetaSweepRow,
)
from core.states import StateKind, SymmetricState, make_state, parse_state_spec
from core.steering import canonical_form, ellipsoid, mesh_points, real_rep, volume_monogamy

logger = logging.getLogger(__name__)

SWEEP_FAMILIES = (StateKind.GHZ, StateKind.W, StateKind.WBAR, StateKind.WWBAR)
THETA_FAMILIES = (StateKind.GHZ_GEN, StateKind.WWBAR_GEN)


def _pair(z: complex) -> Tuple[float, float]:
    return (float(z.real), float(z.imag))


def _point_pair(point: ExtendedComplex) -> Optional[Tuple[float, float]]:
    return None if point.is_infinite else _pair(point.value)


class AnalysisPipeline:
    """Runs the chain state -> roots -> marginals -> entanglement -> steering"""

    def analyze(self, spec: str) -> AnalysisReport:
        """Full report for one state spec"""
        state = parse_state_spec(spec)
        logger.info("analyzing %s (N=%d)", spec, state.n_qubits)
        return self.analyze_state(state, spec)

    def analyze_state(self, state: SymmetricState, spec: str) -> AnalysisReport:
        # Step 1: Majorana roots
        roots = roots_from_dicke(state)
        points = clockwise_order(roots.points())
        spinors = spinors_from_roots(roots)
        spinors.sort(key=lambda s: (round(s.beta, 9), (-s.alpha) % (2 * math.pi)))

        # Step 2: marginals and entanglement
        rho2 = reduce_two(state)
        rho2.validate()
        rho1 = reduce_one(state)
        rho1.validate()
        if state.n_qubits >= 3:
            tangles = n_tangle(state)
            c, r_eigs = tangles.concurrence, list(tangles.r_eigs)
            tau, ckw = tangles.tau, tangles.ckw_residual
        else:
            c, eigs = concurrence(rho2)
            r_eigs, tau, ckw = [float(e) for e in eigs], None, None

        # Step 3: steering
        lam = real_rep(rho2)
        cf = canonical_form(lam)
        geometry = ellipsoid(cf)
        monogamy = volume_monogamy(lam)

        canonical = CanonicalSummary(
            type=cf.kind,
            g_omega_eigenvalues=[float(v) for v in cf.eigenvalues],
            x0=[float(v) for v in cf.x0],
            x0_minkowski_norm=cf.x0_norm,
            semiaxes=list(geometry.semiaxes),
            oriented_semiaxes=list(geometry.oriented_semiaxes),
            center=list(geometry.center),
            volume_fraction=geometry.volume_fraction,
            sign=cf.sign if cf.is_type_one else None,
            a0=cf.a0,
            a1=cf.a1,
            phi0=cf.phi0,
            structure_residual=cf.structure_residual,
        )
        return AnalysisReport(
            spec=spec,
            n_qubits=state.n_qubits,
            dicke=[_pair(d) for d in state.dicke],
            roots=[_pair(p.value) for p in points if not p.is_infinite],
            infinity_count=roots.infinity_count,
            degeneracy_pattern=list(degeneracy_pattern(roots)),
            spinors=[SpinorOrientation(alpha=s.alpha, beta=s.beta, bloch=[float(x) for x in s.bloch]) for s in spinors],
            concurrence=c,
            r_eigenvalues=r_eigs,
            det_rho1=rho1.determinant,
            tangle=tau,
            ckw_residual=ckw,
            bloch=[float(x) for x in rho1.bloch],
            real_rep=lam.matrix.tolist(),
            det_lambda=lam.determinant,
            canonical=canonical,
            volume=monogamy.v,
            volume_lhs=monogamy.lhs,
            monogamy_bound=monogamy.bound,
            monogamy_satisfied=monogamy.satisfied,
        )

    def _sweep_row(self, kind: StateKind, n: int) -> SweepRow:
        lam = real_rep(reduce_two(make_state(kind, n)))
        monogamy = volume_monogamy(lam)
        return SweepRow(
            n=n,
            det_lambda=lam.determinant,
            r=float(np.linalg.norm(lam.bob_bloch)),
            v=monogamy.v,
            lhs=monogamy.lhs,
        )

    def sweep(self, family: str, n_min: int, n_max: int) -> List[SweepRow]:
        """Volume monogamy over a range of N, rows in N order"""
        try:
            kind = StateKind(family)
        except ValueError:
            raise InvalidInputError(f"unknown family {family!r}") from None
        if kind not in SWEEP_FAMILIES:
            raise InvalidInputError(f"sweep supports {', '.join(k.value for k in SWEEP_FAMILIES)}")
        if n_min < 3 or n_max < n_min:
            raise InvalidInputError("need 3 <= NMIN <= NMAX")
        if n_max > settings.sweep_max_qubits:
            raise SizeError(f"sweeps are limited to N <= {settings.sweep_max_qubits}")

        sizes = range(n_min, n_max + 1)
        with ThreadPoolExecutor(max_workers=settings.sweep_workers) as executor:
            rows = list(executor.map(lambda n: self._sweep_row(kind, n), sizes))
        logger.info("sweep %s: %d rows", kind.value, len(rows))
        return rows

    def theta_sweep(self, family: str, n: int, steps: int) -> List[ThetaSweepRow]:
        """Entanglement and volume along theta in (0, pi) for a generalized family"""
        try:
            kind = StateKind(family)
        except ValueError:
            raise InvalidInputError(f"unknown family {family!r}") from None
        if kind not in THETA_FAMILIES:
            raise InvalidInputError(f"theta-sweep supports {', '.join(k.value for k in THETA_FAMILIES)}")
        if n < 3 or steps < 1:
            raise InvalidInputError("theta-sweep needs N >= 3 and at least one step")

        def row(j: int) -> ThetaSweepRow:
            theta = math.pi * j / (steps + 1)
            state = make_state(kind, n, theta=theta)
            tangles = n_tangle(state)
            lam = real_rep(reduce_two(state))
            monogamy = volume_monogamy(lam)
            return ThetaSweepRow(
                theta=theta,
                concurrence=tangles.concurrence,
                tangle=tangles.tau,
                det_lambda=lam.determinant,
                r=float(np.linalg.norm(lam.bob_bloch)),
                v=monogamy.v,
                lhs=monogamy.lhs,
            )

        with ThreadPoolExecutor(max_workers=settings.sweep_workers) as executor:
            return list(executor.map(row, range(1, steps + 1)))

    def ellipsoid_mesh(self, spec: str) -> Tuple[List[Tuple[int, int, float, float, float]], MeshSidecar]:
        """Surface samples of the canonical ellipsoid and their metadata"""
        state = parse_state_spec(spec)
        cf = canonical_form(real_rep(reduce_two(state)))
        geometry = ellipsoid(cf)
        rows = mesh_points(cf)
        sidecar = MeshSidecar(
            state=spec,
            n=state.n_qubits,
            type=cf.kind,
            semiaxes=list(geometry.oriented_semiaxes),
            canonical_semiaxes=list(geometry.semiaxes),
            center=list(geometry.center),
            n_azimuth=settings.mesh_azimuth,
            n_polar=settings.mesh_polar,
        )
        return rows, sidecar

    def convert(self, spec_a: str, spec_b: str) -> ConversionReport:
        """Identical local operation taking state A to state B (3 qubits, distinct roots)"""
        state_a, state_b = parse_state_spec(spec_a), parse_state_spec(spec_b)
        if state_a.n_qubits != 3 or state_b.n_qubits != 3:
            raise DomainError("convert applies to 3-qubit states")

        ordered = []
        for spec, state in ((spec_a, state_a), (spec_b, state_b)):
            roots = roots_from_dicke(state)
            if degeneracy_pattern(roots) != (1, 1, 1):
                raise NotDistinctSpinorsError(f"{spec} does not have three distinct Majorana roots")
            ordered.append(clockwise_order(roots.points()))

        op = moebius_from_triples(ordered[0], ordered[1])
        image = apply_identical_local(op, state_a)
        fid = image.fidelity(state_b)
        if fid < 1.0 - 1e-8:
            raise NumericalValidityError(f"converted state has fidelity {fid:.12g}")
        logger.info("converted %s -> %s with fidelity %.15f", spec_a, spec_b, fid)
        return ConversionReport(
            source=spec_a,
            target=spec_b,
            source_roots=[_point_pair(p) for p in ordered[0]],
            target_roots=[_point_pair(p) for p in ordered[1]],
            matrix=[[_pair(x) for x in row] for row in op.matrix],
            fidelity=fid,
        )


# Global pipeline instance
pipeline = AnalysisPipeline()
