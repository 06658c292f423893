import numpy as np
import pytest

from core.errors import DomainError, InvalidInputError, NotDistinctSpinorsError, SizeError
from core.locops import LocalOp
from core.pipeline import pipeline

OMEGA = np.exp(2j * np.pi / 3)


def test_analyze_wwbar3():
    report = pipeline.analyze("wwbar:3")
    assert report.n_qubits == 3
    assert report.concurrence == pytest.approx(1 / 3, abs=1e-10)
    assert report.tangle == pytest.approx(1 / 3, abs=1e-10)
    assert report.canonical.type == "I"
    assert report.canonical.semiaxes == pytest.approx([1, 0.5, 0.5], abs=1e-9)
    assert report.volume == pytest.approx(4 / 25, abs=1e-10)
    assert report.monogamy_satisfied
    assert report.infinity_count == 1 and len(report.roots) == 2
    assert report.degeneracy_pattern == [1, 1, 1]


def test_analyze_ghz7():
    report = pipeline.analyze("ghz:7")
    assert report.concurrence == pytest.approx(0.0, abs=1e-10)
    assert report.tangle == pytest.approx(1.0, abs=1e-10)
    assert report.canonical.semiaxes == pytest.approx([1, 0, 0], abs=1e-9)
    assert report.volume == pytest.approx(0.0, abs=1e-12)


def test_analyze_roots_spec_matches_named_state():
    by_roots = pipeline.analyze("roots:[0,1,inf]").model_dump()
    by_name = pipeline.analyze("wwbar:3").model_dump()
    by_roots.pop("spec")
    by_name.pop("spec")
    assert by_roots.keys() == by_name.keys()
    for key in ("concurrence", "tangle", "volume", "volume_lhs", "det_lambda"):
        assert by_roots[key] == pytest.approx(by_name[key], abs=1e-12)
    assert np.allclose(by_roots["real_rep"], by_name["real_rep"], atol=1e-12)
    assert by_roots["canonical"]["semiaxes"] == pytest.approx(by_name["canonical"]["semiaxes"], abs=1e-9)


def test_analyze_two_qubit_state_has_no_tangle():
    report = pipeline.analyze("ghz:2")
    assert report.tangle is None and report.concurrence == pytest.approx(1.0, abs=1e-10)


def test_analyze_type_two():
    report = pipeline.analyze("w:5")
    assert report.canonical.type == "II"
    assert report.canonical.a0 == pytest.approx(0.25, abs=1e-6)
    assert report.canonical.center == pytest.approx([0, 0, 0.75], abs=1e-6)


@pytest.mark.parametrize("spec", ["ghz:64", "wwbar:97"])
def test_analyze_large_n(spec):
    report = pipeline.analyze(spec)
    assert len(report.roots) + report.infinity_count == report.n_qubits
    assert report.degeneracy_pattern == [1] * report.n_qubits
    assert report.canonical.type == "I"


def test_convert_rejects_repeated_roots():
    with pytest.raises(NotDistinctSpinorsError):
        pipeline.convert("roots:[1,1,2]", "ghz:3")


def test_analyze_is_deterministic():
    assert pipeline.analyze("wwbar-gen:5:pi/3").model_dump_json() == pipeline.analyze("wwbar-gen:5:pi/3").model_dump_json()


def test_sweep_rows_in_order():
    rows = pipeline.sweep("wwbar", 5, 50)
    assert [row.n for row in rows] == list(range(5, 51))
    assert rows[0].lhs == pytest.approx(4 ** (2 / 3) / 25, abs=1e-10)
    w_rows = pipeline.sweep("w", 5, 50)
    assert w_rows[0].lhs == pytest.approx(4 ** (-4 / 3), abs=1e-10)
    assert all(row.lhs < 1e-10 for row in pipeline.sweep("ghz", 3, 50))


def test_sweep_large_n():
    rows = pipeline.sweep("w", 199, 200)
    assert rows[-1].lhs == pytest.approx(199 ** (-4 / 3), abs=1e-10)


def test_sweep_validation():
    with pytest.raises(InvalidInputError):
        pipeline.sweep("wwbar", 2, 5)
    with pytest.raises(InvalidInputError):
        pipeline.sweep("dicke", 3, 5)
    with pytest.raises(SizeError):
        pipeline.sweep("w", 3, 201)


def test_theta_sweep():
    rows = pipeline.theta_sweep("ghz-gen", 3, 9)
    assert len(rows) == 9
    assert rows[4].theta == pytest.approx(np.pi / 2)
    # the balanced point is GHZ itself
    assert rows[4].tangle == pytest.approx(1.0, abs=1e-10)
    assert all(0 < row.theta < np.pi for row in rows)
    assert [row.theta for row in rows] == sorted(row.theta for row in rows)


def test_convert_wwbar3_to_ghz3():
    report = pipeline.convert("wwbar:3", "ghz:3")
    assert report.fidelity >= 1 - 1e-9
    found = LocalOp(np.array([[complex(*x) for x in row] for row in report.matrix]))
    assert found.projective_distance(LocalOp(np.array([[1, OMEGA], [1, OMEGA ** 2]]))) < 1e-8
    assert report.source_roots[-1] is None


def test_convert_identity():
    report = pipeline.convert("ghz:3", "ghz:3")
    matrix = np.array([[complex(*x) for x in row] for row in report.matrix])
    assert np.allclose(matrix, np.eye(2), atol=1e-9)
    assert report.fidelity == pytest.approx(1.0)


def test_convert_domain_errors():
    with pytest.raises(NotDistinctSpinorsError):
        pipeline.convert("w:3", "ghz:3")
    with pytest.raises(DomainError):
        pipeline.convert("ghz:4", "ghz:3")


@pytest.mark.parametrize("spec,axes", [
    ("wwbar:6", (1 / 3, 1 / 3, 1 / 3)),
    ("wwbar:20", (0.1, 0.1, 0.8)),
    ("wwbar:50", (0.04, 0.04, 0.92)),
    ("ghz:5", (0.0, 0.0, 1.0)),
])
def test_ellipsoid_sidecar(spec, axes):
    rows, sidecar = pipeline.ellipsoid_mesh(spec)
    assert len(rows) == 64 * 32
    assert sidecar.semiaxes == pytest.approx(list(axes), abs=1e-9)
    assert sidecar.canonical_semiaxes == pytest.approx(sorted(axes, reverse=True), abs=1e-9)
