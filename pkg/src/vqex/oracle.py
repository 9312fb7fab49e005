"""Exact diagonalization oracle: full spectra, degenerate-subspace grouping,
overlaps, and per-eigenstate observable tables.

Dense solves are capped at N = 12.  The MFIM is real in the computational
basis, so the builder assembles a real symmetric matrix whenever no term
carries a Y factor and hands it to the symmetric eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import magnetization_density
from .pauli import OperatorSum
from .state import Bipartition, QubitState, entanglement_entropy, reduced_density_matrix

DENSE_QUBIT_LIMIT = 12


def dense_matrix(h: OperatorSum) -> np.ndarray:
    """Materialize ``h`` as a dense matrix (real when no Y factor appears)."""
    n = h.n_qubits
    if n > DENSE_QUBIT_LIMIT:
        raise ValueError(f"dense construction capped at N={DENSE_QUBIT_LIMIT}, got N={n}")
    dim = 1 << n
    real = h.is_real()
    mat = np.zeros((dim, dim), dtype=np.float64 if real else np.complex128)
    cols = np.arange(dim, dtype=np.int64)
    for c, p in h.terms:
        rows = cols ^ (p.x_mask | 0)
        signs = 1.0 - 2.0 * (np.bitwise_count(cols & np.int64(p.z_mask)) & 1).astype(np.float64)
        w = c * p.phase
        mat[rows, cols] += (w.real if real else w) * signs
    return mat


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition; ``vectors[:, k]`` belongs to ``energies[k]``."""

    n_qubits: int
    energies: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.energies.shape[0]

    def eigenstate(self, k: int) -> QubitState:
        return QubitState(np.ascontiguousarray(self.vectors[:, k], dtype=np.complex128))

    def mean_level_spacing(self) -> float:
        return float((self.energies[-1] - self.energies[0]) / (self.dim - 1))


def diagonalize(h: OperatorSum) -> Spectrum:
    """Full orthonormal eigendecomposition of the dense matrix of ``h``."""
    mat = dense_matrix(h)
    energies, vectors = scipy.linalg.eigh(mat)
    return Spectrum(n_qubits=h.n_qubits, energies=energies, vectors=vectors)


@dataclass(frozen=True)
class DegenerateSubspace:
    """Indices of eigenstates chained together by gaps below the window."""

    indices: tuple
    delta: float

    def __len__(self) -> int:
        return len(self.indices)


def group_degenerate(spec: Spectrum, delta: float) -> list[DegenerateSubspace]:
    """Greedy left-to-right grouping: a new subspace starts whenever the gap
    to the previous energy is >= delta.

    Chaining is transitive, so a subspace can span more than delta end to
    end; that matches the windowed-overlap diagnostic this feeds.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    groups = []
    current = [0]
    for k in range(1, spec.dim):
        if spec.energies[k] - spec.energies[k - 1] < delta:
            current.append(k)
        else:
            groups.append(DegenerateSubspace(indices=tuple(current), delta=delta))
            current = [k]
    groups.append(DegenerateSubspace(indices=tuple(current), delta=delta))
    return groups


def subspace_overlap(state: QubitState, sub: DegenerateSubspace, spec: Spectrum) -> float:
    """``sum_{k in sub} |<v_k|psi>|^2``."""
    if state.n_qubits != spec.n_qubits:
        raise ValueError("dimension mismatch between state and spectrum")
    cols = spec.vectors[:, list(sub.indices)]
    amps = cols.conj().T @ state.amplitudes
    return float(np.sum(np.abs(amps) ** 2))


def all_subspace_overlaps(state: QubitState, groups, spec: Spectrum) -> np.ndarray:
    """Overlap per subspace, in one projection pass."""
    proj = np.abs(spec.vectors.conj().T @ state.amplitudes) ** 2
    return np.array([proj[list(g.indices)].sum() for g in groups])


def eigenstate_observable_table(spec: Spectrum, part: Bipartition) -> np.ndarray:
    """Rows of (E, M_Z, S_A), one per eigenstate in ascending energy order."""
    part.validate(spec.n_qubits)
    rows = np.empty((spec.dim, 3))
    for k in range(spec.dim):
        v = spec.eigenstate(k)
        rows[k, 0] = spec.energies[k]
        rows[k, 1] = magnetization_density(v)
        rows[k, 2] = entanglement_entropy(reduced_density_matrix(v, part))
    return rows
