import numpy as np
import pytest

from vqex import ModelParams, build_mfim, diagonalize

PAULI_2X2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_pauli(p):
    """Independent dense build of a PauliString: explicit 2x2 kron chain.

    Site 1 is the least significant bit, so it must be the last kron factor.
    """
    mat = np.array([[1.0 + 0j]])
    for site in range(p.n_qubits, 0, -1):
        mat = np.kron(mat, PAULI_2X2[p.axis(site)])
    return mat


def kron_opsum(op):
    return sum(c * kron_pauli(p) for c, p in op.terms)


@pytest.fixture(scope="session")
def mfim6():
    h = build_mfim(ModelParams(n_qubits=6, h_x=0.8, h_z=0.5))
    return h, diagonalize(h)


@pytest.fixture(scope="session")
def tfim6():
    h = build_mfim(ModelParams(n_qubits=6, h_x=0.8, h_z=0.0))
    return h, diagonalize(h)


def random_states(n_qubits, count, seed):
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    for _ in range(count):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        yield v / np.linalg.norm(v)
