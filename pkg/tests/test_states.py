import math

import numpy as np
import pytest

from core.errors import InvalidInputError, SizeError, SpecParseError
from core.states import (
    QubitRegisterState,
    StateKind,
    SymmetricState,
    fidelity,
    make_state,
    parse_angle,
    parse_state_spec,
    to_register,
)


def test_named_states_dicke_coefficients():
    s = 1 / math.sqrt(2)
    assert np.allclose(make_state("ghz", 4).dicke, [s, 0, 0, 0, s])
    assert np.allclose(make_state("w", 4).dicke, [0, 0, 0, 1, 0])
    assert np.allclose(make_state("wbar", 4).dicke, [0, 1, 0, 0, 0])
    assert np.allclose(make_state("wwbar", 4).dicke, [0, s, 0, s, 0])
    assert np.allclose(make_state("dicke", 4, k=2).dicke, [0, 0, 1, 0, 0])


def test_generalized_states():
    theta = math.pi / 3
    ghz = make_state(StateKind.GHZ_GEN, 5, theta=theta)
    assert ghz.dicke[0] == pytest.approx(math.sin(theta / 2))
    assert ghz.dicke[5] == pytest.approx(math.cos(theta / 2))
    wwbar = make_state(StateKind.WWBAR_GEN, 5, theta=theta)
    assert wwbar.dicke[1] == pytest.approx(math.sin(theta / 2))
    assert wwbar.dicke[4] == pytest.approx(math.cos(theta / 2))
    assert fidelity(make_state("ghz-gen", 5, theta=math.pi / 2), make_state("ghz", 5)) == pytest.approx(1.0)


@pytest.mark.parametrize("theta", [0.0, math.pi, -0.1, 4.0])
def test_theta_outside_open_interval(theta):
    with pytest.raises(InvalidInputError):
        make_state("ghz-gen", 3, theta=theta)


def test_small_n_rejected():
    with pytest.raises(InvalidInputError):
        make_state("ghz", 1)
    with pytest.raises(InvalidInputError):
        make_state("wwbar", 2)


def test_wwbar3_register_amplitudes():
    amps = to_register(make_state("wwbar", 3)).amplitudes
    expected = np.full(8, 1 / math.sqrt(6))
    expected[0] = expected[7] = 0.0
    assert np.allclose(amps, expected, atol=1e-12)


def test_w_register_has_single_excitations():
    # d_{N-1} weights the strings with a single one
    amps = to_register(make_state("w", 3)).amplitudes
    assert np.flatnonzero(np.abs(amps) > 1e-12).tolist() == [1, 2, 4]


def test_register_size_guard():
    with pytest.raises(SizeError):
        to_register(make_state("ghz", 15))


def test_symmetric_state_validation():
    with pytest.raises(InvalidInputError):
        SymmetricState(np.array([1.0, 1.0]))
    state = SymmetricState.from_coefficients([0, 1j, 1j])
    assert state.dicke[1].real > 0 and abs(state.dicke[1].imag) < 1e-15


def test_register_validation():
    with pytest.raises(InvalidInputError):
        QubitRegisterState(np.ones(3) / math.sqrt(3))


@pytest.mark.parametrize("token,value", [
    ("pi/2", math.pi / 2), ("2pi/3", 2 * math.pi / 3), ("0.5*pi", math.pi / 2), ("pi", math.pi), ("1.25", 1.25),
])
def test_parse_angle(token, value):
    assert parse_angle(token) == pytest.approx(value)


def test_parse_state_spec_named():
    assert parse_state_spec("wwbar:5").n_qubits == 5
    assert parse_state_spec("dicke:6:3").dicke[3] == pytest.approx(1.0)
    assert parse_state_spec("ghz-gen:4:pi/3").dicke[0] == pytest.approx(0.5)


def test_parse_state_spec_roots_matches_wwbar3():
    state = parse_state_spec("roots:[0,1,inf]")
    assert fidelity(state, make_state("wwbar", 3)) == pytest.approx(1.0, abs=1e-12)


def test_parse_state_spec_roots_with_complex_tokens():
    state = parse_state_spec("roots:[1, -0.5+0.8660254037844386i, -0.5-0.8660254037844386j]")
    assert fidelity(state, make_state("ghz", 3)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("text", ["bell:2", "ghz", "ghz:x", "ghz-gen:3", "dicke:4", "roots:0,1", "roots:[0,foo]", "w:3:1"])
def test_parse_state_spec_errors(text):
    with pytest.raises(SpecParseError):
        parse_state_spec(text)
