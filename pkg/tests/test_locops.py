import numpy as np
import pytest

from core.errors import InvalidInputError
from core.locops import LocalOp, apply_identical_local, clockwise_order, moebius_from_triples
from core.majorana import dicke_from_roots, match_root_sets, roots_from_dicke
from core.numerics import ExtendedComplex, MajoranaRootSet
from core.states import fidelity, make_state

OMEGA = np.exp(2j * np.pi / 3)
ZERO, ONE, INF = ExtendedComplex.finite(0), ExtendedComplex.finite(1), ExtendedComplex.infinity()


def _random_point(rng):
    return ExtendedComplex.finite(complex(rng.standard_normal(), rng.standard_normal()))


def test_local_op_normalization():
    op = LocalOp(np.array([[2.0, 0.0], [0.0, 2.0]]))
    assert np.allclose(op.matrix, np.eye(2))
    flipped = LocalOp(-np.eye(2))
    assert np.allclose(flipped.matrix, np.eye(2))
    assert np.linalg.det(LocalOp(np.array([[1, 2], [3, 4j]])).matrix) == pytest.approx(1.0)


def test_local_op_then_inverse_restores_state(rng):
    for n in (3, 5, 8):
        state = make_state("wwbar", n)
        for _ in range(5):
            op = LocalOp(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
            assert np.allclose(op.inverse().matrix @ op.matrix, np.eye(2), atol=1e-12)
            back = apply_identical_local(op.inverse(), apply_identical_local(op, state))
            assert fidelity(back, state) >= 1 - 1e-9


def test_local_op_rejects_singular():
    with pytest.raises(InvalidInputError):
        LocalOp(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_moebius_maps_the_triple():
    dst = (ONE, ExtendedComplex.finite(OMEGA ** 2), ExtendedComplex.finite(OMEGA))
    op = moebius_from_triples((ZERO, ONE, INF), dst)
    reference = LocalOp(np.array([[1, OMEGA], [1, OMEGA ** 2]]))
    assert op.projective_distance(reference) < 1e-8
    for src, target in zip((ZERO, ONE, INF), dst):
        assert op.map_point(src).chordal_distance(target) < 1e-12


def test_moebius_identity():
    op = moebius_from_triples((ZERO, ONE, INF), (ZERO, ONE, INF))
    assert np.allclose(op.matrix, np.eye(2))


def test_moebius_rejects_coincident_points():
    with pytest.raises(InvalidInputError):
        moebius_from_triples((ZERO, ZERO, INF), (ZERO, ONE, INF))
    with pytest.raises(InvalidInputError):
        moebius_from_triples((ZERO, ONE), (ZERO, ONE))


def test_wwbar3_to_ghz3():
    op = LocalOp(np.array([[1, OMEGA], [1, OMEGA ** 2]]))
    image = apply_identical_local(op, make_state("wwbar", 3))
    assert fidelity(image, make_state("ghz", 3)) >= 1 - 1e-9


def test_roots_transform_covariantly(rng):
    for _ in range(20):
        op = LocalOp(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
        state = dicke_from_roots(MajoranaRootSet(tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))))
        moved = [op.map_point(p) for p in roots_from_dicke(state).points()]
        found = roots_from_dicke(apply_identical_local(op, state))
        assert match_root_sets(found, MajoranaRootSet.from_points(moved)) < 1e-8


def test_random_distinct_triples_interconvert(rng):
    for _ in range(50):
        src = [_random_point(rng) for _ in range(3)]
        dst = [_random_point(rng) for _ in range(3)]
        a = dicke_from_roots(MajoranaRootSet.from_points(src))
        b = dicke_from_roots(MajoranaRootSet.from_points(dst))
        op = moebius_from_triples(src, dst)
        assert fidelity(apply_identical_local(op, a), b) >= 1 - 1e-8


def test_clockwise_order_of_wwbar3_roots():
    ordered = clockwise_order([INF, ONE, ZERO])
    assert ordered[0] == ZERO and ordered[2] == INF


def test_clockwise_order_of_ghz3_roots():
    ordered = clockwise_order([ExtendedComplex.finite(OMEGA ** k) for k in range(3)])
    assert ordered[0].chordal_distance(ONE) < 1e-12
    assert ordered[1].chordal_distance(ExtendedComplex.finite(OMEGA ** 2)) < 1e-12
