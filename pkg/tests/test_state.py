import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from vqex import (Bipartition, OperatorSum, PauliString, QubitState,
                  apply_operator_sum, apply_pauli, entanglement_entropy,
                  expectation, inner_product, pauli_rotation, product_state,
                  reduced_density_matrix, zero_state)

from conftest import kron_opsum, kron_pauli, random_states


def test_norm_policing():
    with pytest.raises(ValueError):
        QubitState(np.array([1.0, 1.0], dtype=complex))
    QubitState(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2))
    QubitState(np.array([3.0, 4.0], dtype=complex), unnormalized=True)


def test_rotation_identity_and_closed_form():
    s = next(random_states(3, 1, 0))
    st_ = QubitState(s)
    p = PauliString.from_sites(3, {1: "Y", 2: "Z"})
    same = pauli_rotation(st_, p, 0.0)
    assert np.allclose(same.amplitudes, s)
    # N=1: exp(i t Y)|0> = cos t |0> - sin t |1>
    r = pauli_rotation(zero_state(1), PauliString.single(1, 1, "Y"), 0.7)
    assert np.allclose(r.amplitudes, [np.cos(0.7), -np.sin(0.7)])


@given(st.integers(min_value=1, max_value=2), st.integers(0, 30),
       st.floats(min_value=-7.0, max_value=7.0, allow_nan=False))
@settings(max_examples=40, deadline=None)
def test_rotation_matches_matrix_exponential(n, seed, theta):
    rng = np.random.default_rng(seed)
    full = (1 << n) - 1
    p = PauliString(n, int(rng.integers(0, full + 1)), int(rng.integers(0, full + 1)))
    amps = next(random_states(n, 1, seed))
    expected = scipy.linalg.expm(1j * theta * kron_pauli(p)) @ amps
    got = pauli_rotation(QubitState(amps), p, theta)
    assert np.max(np.abs(got.amplitudes - expected)) < 1e-12
    assert abs(np.linalg.norm(got.amplitudes) - 1.0) < 1e-12


@given(st.integers(0, 20), st.floats(-6, 6), st.floats(-6, 6))
@settings(max_examples=40, deadline=None)
def test_same_generator_rotations_compose(seed, t1, t2):
    n = 3
    rng = np.random.default_rng(seed)
    p = PauliString(n, int(rng.integers(0, 8)), int(rng.integers(0, 8)))
    s = QubitState(next(random_states(n, 1, seed + 1)))
    a = pauli_rotation(pauli_rotation(s, p, t1), p, t2)
    b = pauli_rotation(s, p, t1 + t2)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-12


def test_pi_rotation_flips_sign():
    s = QubitState(next(random_states(2, 1, 5)))
    p = PauliString.from_sites(2, {1: "X", 2: "Z"})
    out = pauli_rotation(s, p, np.pi)
    assert np.max(np.abs(out.amplitudes + s.amplitudes)) < 1e-12


def test_operator_sum_application(mfim6):
    h, spec = mfim6
    # aligned state: ZZ sum gives 6J, X flips add h_x branches
    s = zero_state(6)
    out = apply_operator_sum(s, h)
    dense = kron_opsum(h)
    assert np.max(np.abs(out.amplitudes - dense @ s.amplitudes)) < 1e-12
    assert not out.normalized
    # identity operator leaves input unchanged
    ident = OperatorSum([(1.0, PauliString.identity(6))])
    same = apply_operator_sum(s, ident)
    assert np.allclose(same.amplitudes, s.amplitudes)
    # eigenvector maps to E_n * itself
    for k in (0, 17, 63):
        v = spec.eigenstate(k)
        hv = apply_operator_sum(v, h)
        assert np.max(np.abs(hv.amplitudes - spec.energies[k] * v.amplitudes)) < 1e-10


def test_expectation_values(mfim6):
    h, spec = mfim6
    assert expectation(zero_state(6), h) == pytest.approx(9.0, abs=1e-12)
    for k in (0, 31, 63):
        assert expectation(spec.eigenstate(k), h) == pytest.approx(spec.energies[k], abs=1e-10)
    ident = OperatorSum([(1.0, PauliString.identity(6))])
    s = QubitState(next(random_states(6, 1, 3)))
    assert expectation(s, ident) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        expectation(apply_operator_sum(s, h), h)


def test_cauchy_schwarz_equality_iff_eigenvector(mfim6):
    h, spec = mfim6
    s = QubitState(next(random_states(6, 1, 11)))
    e = expectation(s, h)
    hnorm = np.linalg.norm(apply_operator_sum(s, h).amplitudes)
    assert e * e < hnorm * hnorm
    v = spec.eigenstate(5)
    ev = expectation(v, h)
    hv = np.linalg.norm(apply_operator_sum(v, h).amplitudes)
    assert ev * ev == pytest.approx(hv * hv, rel=1e-12)


def test_inner_product(mfim6):
    _, spec = mfim6
    a = QubitState(next(random_states(6, 1, 0)))
    assert inner_product(a, a) == pytest.approx(1.0)
    assert inner_product(zero_state(2), QubitState(np.eye(4, dtype=complex)[2])) == 0.0
    # conjugate symmetry
    b = QubitState(next(random_states(6, 1, 1)))
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)))
    # distinct eigenvectors are orthogonal
    assert abs(inner_product(spec.eigenstate(3), spec.eigenstate(40))) < 1e-9
    with pytest.raises(ValueError):
        inner_product(zero_state(2), zero_state(3))


def test_reduced_density_matrix_product_and_bell():
    prod = product_state([0.3, 1.1, 2.0])
    rho = reduced_density_matrix(prod, Bipartition({1, 3}))
    assert rho.shape == (4, 4)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.trace(rho @ rho).real == pytest.approx(1.0)  # rank one
    bell = QubitState(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))
    rho_b = reduced_density_matrix(bell, Bipartition({1}))
    assert np.allclose(rho_b, np.diag([0.5, 0.5]))


def test_rdm_matches_independent_partial_trace():
    # independent route: dense outer product, reshape, trace axes pairwise
    amps = next(random_states(4, 1, 9))
    s = QubitState(amps)
    part = Bipartition({2, 4})
    rho = reduced_density_matrix(s, part)
    full = np.outer(amps, amps.conj()).reshape([2] * 8)
    # trace out sites 1 and 3 (axes 3 and 1 on each side for N=4)
    rho_ref = np.trace(np.trace(full, axis1=3, axis2=7), axis1=1, axis2=4)
    # row ordering: site 2 on the least significant bit, site 4 above it
    rho_ref = rho_ref.reshape(4, 4)
    # axes after both traces: (site4, site2) x (site4', site2')
    assert np.allclose(rho, rho_ref, atol=1e-12)


def test_cat_state_entropy():
    # (|010101> + |101010>)/sqrt(2), sites 1..6 with site 1 the LSB
    a = sum(1 << (i - 1) for i in (2, 4, 6))
    b = sum(1 << (i - 1) for i in (1, 3, 5))
    amps = np.zeros(64, dtype=complex)
    amps[a] = amps[b] = 1 / np.sqrt(2)
    s = QubitState(amps)
    rho = reduced_density_matrix(s, Bipartition({1, 2, 3}))
    evals = np.sort(np.linalg.eigvalsh(rho))[::-1]
    assert np.allclose(evals[:2], [0.5, 0.5], atol=1e-12)
    assert entanglement_entropy(rho) == pytest.approx(np.log(2), abs=1e-10)


def test_entropy_zero_for_product_states():
    rho = reduced_density_matrix(product_state([0.2, 0.9, 1.7, 0.1]), Bipartition({1, 2}))
    assert entanglement_entropy(rho) == pytest.approx(0.0, abs=1e-10)


def test_entropy_symmetric_under_complement(mfim6):
    _, spec = mfim6
    part = Bipartition({1, 2, 3})
    for k in (0, 20, 45):
        v = spec.eigenstate(k)
        sa = entanglement_entropy(reduced_density_matrix(v, part))
        sb = entanglement_entropy(reduced_density_matrix(v, part.complement(6)))
        assert sa == pytest.approx(sb, abs=1e-9)
        assert 0.0 <= sa <= 3 * np.log(2) + 1e-12


def test_entropy_rejects_bad_inputs():
    with pytest.raises(ValueError):
        entanglement_entropy(np.array([[0.9, 0.4], [0.1, 0.1]]))  # not Hermitian
    with pytest.raises(ValueError):
        entanglement_entropy(np.diag([1.5, -0.5]))  # negative eigenvalue


def test_bipartition_validation():
    with pytest.raises(ValueError):
        Bipartition(set())
    with pytest.raises(ValueError):
        reduced_density_matrix(zero_state(3), Bipartition({1, 2, 3}))  # full region
    with pytest.raises(ValueError):
        reduced_density_matrix(zero_state(3), Bipartition({5}))
