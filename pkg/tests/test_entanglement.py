import numpy as np
import pytest

from conftest import random_symmetric_state, random_unitary
from core.entanglement import concurrence, n_tangle, r_matrix_eigs, r_matrix_eigs_closed_form, spin_flip
from core.errors import InvalidInputError
from core.numerics import hermitian_eig4
from core.reductions import DensityMatrix2, partial_trace_register, reduce_two
from core.states import make_state, to_register


def test_wwbar3_concurrence_and_spectrum():
    c, eigs = concurrence(reduce_two(make_state("wwbar", 3)))
    assert abs(c - 1 / 3) < 1e-10
    assert np.abs(eigs - np.array([1 / 4, 1 / 36, 0, 0])).max() < 1e-10


def test_hermitian_form_of_r_matrix():
    rho = reduce_two(make_state("wwbar", 3))
    values, vectors = hermitian_eig4(rho.matrix)
    root = vectors @ np.diag(np.sqrt(np.clip(values, 0, None))) @ vectors.conj().T
    similar = root @ spin_flip(rho) @ root
    eigs, _ = hermitian_eig4(0.5 * (similar + similar.conj().T))
    assert np.abs(eigs - np.array([1 / 4, 1 / 36, 0, 0])).max() < 1e-10


@pytest.mark.parametrize("n", [5, 6, 7, 12, 30])
def test_wwbar_r_spectrum_closed_form(n):
    eigs = r_matrix_eigs(reduce_two(make_state("wwbar", n)))
    found = np.sort(np.sqrt(eigs))[::-1]
    expected = np.sort(np.array(r_matrix_eigs_closed_form(n)))[::-1]
    assert np.abs(found - expected).max() < 1e-10


def test_wwbar6_spectrum():
    # sqrt(R) eigenvalues for N = 6 are 1/3 three times and 0
    eigs = np.sqrt(r_matrix_eigs(reduce_two(make_state("wwbar", 6))))
    assert np.abs(eigs - np.array([1 / 3, 1 / 3, 1 / 3, 0])).max() < 1e-10


@pytest.mark.parametrize("n", [4, 5, 6, 11, 25, 50])
def test_wwbar_concurrence_vanishes(n):
    assert concurrence(reduce_two(make_state("wwbar", n)))[0] < 1e-10


@pytest.mark.parametrize("n", range(3, 11))
def test_w_concurrence(n):
    state = make_state("w", n)
    assert abs(concurrence(reduce_two(state))[0] - 2 / n) < 1e-10
    oracle = DensityMatrix2(partial_trace_register(to_register(state), [0, 1]))
    assert abs(concurrence(oracle)[0] - 2 / n) < 1e-10


def test_closed_form_domain():
    with pytest.raises(InvalidInputError):
        r_matrix_eigs_closed_form(4)
    with pytest.raises(InvalidInputError):
        r_matrix_eigs_closed_form(8, family="ghz")


def test_tangles():
    assert abs(n_tangle(make_state("wwbar", 3)).tau - 1 / 3) < 1e-10
    assert abs(n_tangle(make_state("ghz", 3)).tau - 1) < 1e-10
    assert abs(n_tangle(make_state("w", 3)).tau) < 1e-10
    for n in (4, 5, 10, 33, 50):
        assert abs(n_tangle(make_state("wwbar", n)).tau - 1) < 1e-10


def test_wwbar3_report_fields():
    report = n_tangle(make_state("wwbar", 3))
    assert report.det_rho1 == pytest.approx(5 / 36, abs=1e-12)
    assert report.ckw_residual == pytest.approx(report.tau, abs=1e-12)
    assert n_tangle(make_state("wwbar", 5)).ckw_residual is None


def test_ckw_residual_nonnegative(rng):
    for _ in range(200):
        report = n_tangle(random_symmetric_state(rng, 3))
        assert report.ckw_residual >= -1e-10


def test_concurrence_local_unitary_invariance(rng):
    for _ in range(20):
        rho = reduce_two(random_symmetric_state(rng, 4))
        u, v = random_unitary(rng), random_unitary(rng)
        op = np.kron(u, v)
        moved = DensityMatrix2(op @ rho.matrix @ op.conj().T)
        assert abs(concurrence(moved)[0] - concurrence(rho)[0]) < 1e-8


def test_n_tangle_needs_three_qubits():
    with pytest.raises(InvalidInputError):
        n_tangle(make_state("ghz", 2))
