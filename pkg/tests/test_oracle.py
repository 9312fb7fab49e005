import numpy as np
import pytest

from vqex import (Bipartition, ModelParams, OperatorSum, PauliString, QubitState,
                  build_mfim, diagonalize, eigenstate_observable_table,
                  entanglement_entropy, group_degenerate,
                  reduced_density_matrix, subspace_overlap)
from vqex.oracle import all_subspace_overlaps, dense_matrix

from conftest import kron_opsum


def test_single_qubit_field():
    h = OperatorSum([(0.7, PauliString.single(1, 1, "X"))])
    spec = diagonalize(h)
    assert np.allclose(spec.energies, [-0.7, 0.7])


def test_eigen_residuals_and_orthonormality(mfim6):
    h, spec = mfim6
    mat = dense_matrix(h)
    res = mat @ spec.vectors - spec.vectors * spec.energies
    assert np.max(np.abs(res)) < 1e-9
    gram = spec.vectors.conj().T @ spec.vectors
    assert np.max(np.abs(gram - np.eye(spec.dim))) < 1e-9
    assert np.all(np.diff(spec.energies) >= 0)


def test_trace_identity(mfim6):
    h, spec = mfim6
    mat = dense_matrix(h)
    assert np.sum(spec.energies) == pytest.approx(np.trace(mat), rel=1e-8, abs=1e-8)


def test_dense_matrix_matches_kron(mfim6):
    h, _ = mfim6
    assert np.max(np.abs(dense_matrix(h) - kron_opsum(h))) < 1e-12


def test_dense_cap():
    with pytest.raises(ValueError):
        diagonalize(build_mfim(ModelParams(n_qubits=13, h_x=1.0)))


def test_group_degenerate_edges(mfim6):
    _, spec = mfim6
    singletons = group_degenerate(spec, 0.0)
    assert len(singletons) == spec.dim
    assert all(len(g) == 1 for g in singletons)
    whole = group_degenerate(spec, 1e9)
    assert len(whole) == 1 and len(whole[0]) == spec.dim
    # partition property at a generic window
    groups = group_degenerate(spec, 0.12)
    seen = [k for g in groups for k in g.indices]
    assert seen == list(range(spec.dim))


def test_ground_pair_groups_at_012(mfim6):
    _, spec = mfim6
    groups = group_degenerate(spec, 0.12)
    assert 0 in groups[0].indices and 1 in groups[0].indices


def test_subspace_overlaps(mfim6):
    _, spec = mfim6
    groups = group_degenerate(spec, 0.0)
    v = spec.eigenstate(10)
    assert subspace_overlap(v, groups[10], spec) == pytest.approx(1.0, abs=1e-10)
    assert subspace_overlap(v, groups[11], spec) == pytest.approx(0.0, abs=1e-10)
    a, b = 0.6, 0.8
    mix = QubitState(a * spec.eigenstate(20).amplitudes + b * spec.eigenstate(21).amplitudes)
    pair = group_degenerate(spec, float(spec.energies[21] - spec.energies[20]) + 1e-9)
    target = next(g for g in pair if 20 in g.indices)
    assert 21 in target.indices
    assert subspace_overlap(mix, target, spec) == pytest.approx(1.0, abs=1e-10)
    # overlaps across all subspaces sum to one
    total = all_subspace_overlaps(mix, groups, spec).sum()
    assert total == pytest.approx(1.0, abs=1e-9)


def test_observable_table_classical_and_bounds():
    h2 = build_mfim(ModelParams(n_qubits=4, h_x=0.0, h_z=0.0))
    spec2 = diagonalize(h2)
    table = eigenstate_observable_table(spec2, Bipartition({1, 2}))
    assert np.allclose(table[:, 2], 0.0, atol=1e-10)  # classical eigenstates are product
    assert np.all(np.abs(table[:, 1]) <= 1.0 + 1e-12)


def test_observable_table_against_independent_trace(mfim6):
    _, spec = mfim6
    part = Bipartition({1, 2, 3})
    table = eigenstate_observable_table(spec, part)
    idx = np.arange(64)
    popc = np.array([bin(b).count("1") for b in range(64)])
    for k in (0, 13, 50):
        amps = spec.vectors[:, k]
        mz = np.sum(np.abs(amps) ** 2 * (6 - 2 * popc)) / 6
        assert table[k, 1] == pytest.approx(mz, abs=1e-10)
        # independent partial trace via reshape to (A, B)
        m = amps.reshape(8, 8)  # MSB half = sites 4..6, LSB half = sites 1..3
        rho = m.T @ m.conj()  # rows indexed by sites 1..3
        ent = -sum(p * np.log(p) for p in np.linalg.eigvalsh(rho) if p > 1e-12)
        assert table[k, 2] == pytest.approx(float(ent), abs=1e-9)
    assert np.all(table[:, 2] >= -1e-12)
    assert np.all(table[:, 2] <= 3 * np.log(2) + 1e-9)
