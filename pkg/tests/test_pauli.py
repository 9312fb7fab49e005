import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqex import OperatorSum, PauliString, QubitState, apply_pauli

from conftest import kron_pauli, random_states


def test_mask_validation():
    with pytest.raises(ValueError):
        PauliString(2, 0b100, 0)
    with pytest.raises(ValueError):
        PauliString(0, 0, 0)
    PauliString(2, 0b11, 0b01)  # fine


def test_axis_and_label():
    p = PauliString.from_sites(4, {1: "Y", 3: "Z", 4: "X"})
    assert p.axis(1) == "Y" and p.axis(2) == "I" and p.axis(3) == "Z" and p.axis(4) == "X"
    assert p.label() == "Y1Z3X4"
    assert PauliString.identity(3).label() == "I"
    assert p.weight == 3
    assert p.support == (1, 3, 4)


def test_single_site_round_trip():
    for axis in "XYZ":
        p = PauliString.single(5, 3, axis)
        assert p.axis(3) == axis
        assert p.weight == 1


def test_operator_sum_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        OperatorSum([(1.0, PauliString.single(2, 1, "X")),
                     (1.0, PauliString.single(3, 1, "X"))])


mask_pairs = st.tuples(st.integers(min_value=1, max_value=4),
                       st.integers(min_value=0, max_value=15),
                       st.integers(min_value=0, max_value=15))


@given(mask_pairs, st.integers(min_value=0, max_value=10))
@settings(max_examples=60, deadline=None)
def test_apply_pauli_is_involution(spec, state_seed):
    n, x, z = spec
    full = (1 << n) - 1
    p = PauliString(n, x & full, z & full)
    amps = next(random_states(n, 1, state_seed))
    s = QubitState(amps)
    twice = apply_pauli(apply_pauli(s, p), p)
    assert np.max(np.abs(twice.amplitudes - amps)) <= 1e-12


@given(mask_pairs)
@settings(max_examples=60, deadline=None)
def test_mask_action_matches_kron_matrix(spec):
    n, x, z = spec
    full = (1 << n) - 1
    p = PauliString(n, x & full, z & full)
    dense = kron_pauli(p)
    # Hermitian and unitary by construction
    assert np.allclose(dense, dense.conj().T, atol=1e-14)
    amps = next(random_states(n, 1, 7))
    out = apply_pauli(QubitState(amps), p)
    assert np.max(np.abs(out.amplitudes - dense @ amps)) <= 1e-12


def test_trivial_actions_on_vacuum():
    s = QubitState(np.eye(1 << 3, dtype=complex)[0])
    z1 = apply_pauli(s, PauliString.single(3, 1, "Z"))
    assert np.allclose(z1.amplitudes, s.amplitudes)
    x1 = apply_pauli(s, PauliString.single(3, 1, "X"))
    expected = np.zeros(8, dtype=complex)
    expected[1] = 1.0
    assert np.allclose(x1.amplitudes, expected)
    y1 = apply_pauli(s, PauliString.single(3, 1, "Y"))
    assert np.allclose(y1.amplitudes, 1j * expected)
