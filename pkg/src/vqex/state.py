"""Dense statevector states and the primitive operations built on them.

States are complex128 vectors of length 2**N indexed per the bit convention
in :mod:`vqex.pauli` (site 1 = least significant bit).  Normalization is
policed, never silently repaired: anything drifting more than 1e-8 from unit
norm raises unless the state is explicitly tagged unnormalized (the output
of :func:`apply_operator_sum` is such a tag).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kern
from .pauli import OperatorSum, PauliString

NORM_TOL = 1e-8


class QubitState:
    """A (by default normalized) pure state of ``n_qubits`` qubits."""

    __slots__ = ("n_qubits", "amplitudes", "normalized")

    def __init__(self, amplitudes, *, unnormalized: bool = False):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] < 2 or amps.shape[0] & (amps.shape[0] - 1):
            raise ValueError(f"amplitude vector length {amps.shape} is not a power of two >= 2")
        self.n_qubits = int(amps.shape[0]).bit_length() - 1
        self.amplitudes = amps
        self.normalized = not unnormalized
        if self.normalized:
            drift = abs(np.linalg.norm(amps) - 1.0)
            if drift > NORM_TOL:
                raise ValueError(
                    f"state norm drifted {drift:.3e} from 1; renormalization is never "
                    "silent, fix the producer or tag the state unnormalized"
                )

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "QubitState":
        return QubitState(self.amplitudes.copy(), unnormalized=not self.normalized)


def zero_state(n_qubits: int) -> QubitState:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return QubitState(amps)


def basis_state(n_qubits: int, index: int) -> QubitState:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return QubitState(amps)


def product_state(angles) -> QubitState:
    """Tensor product of ``cos(phi_i)|0> + sin(phi_i)|1>`` across sites.

    ``angles[i - 1]`` is the angle of site i; site 1 ends up on the least
    significant bit.
    """
    amps = np.array([1.0], dtype=np.complex128)
    for phi in angles:
        site = np.array([np.cos(phi), np.sin(phi)], dtype=np.complex128)
        amps = np.kron(site, amps)
    return QubitState(amps)


def _check_dims(state: QubitState, n_qubits: int):
    if state.n_qubits != n_qubits:
        raise ValueError(f"dimension mismatch: state has {state.n_qubits} qubits, operator {n_qubits}")


def apply_pauli(state: QubitState, p: PauliString) -> QubitState:
    """Return ``P|psi>``: an amplitude permutation with phases in {1, -1, i, -i}."""
    _check_dims(state, p.n_qubits)
    out = kern.apply_pauli(state.amplitudes, p.x_mask, p.z_mask, p.phase)
    return QubitState(out, unnormalized=not state.normalized)


def pauli_rotation(state: QubitState, p: PauliString, theta: float) -> QubitState:
    """Return ``exp(i theta P)|psi> = cos(theta)|psi> + i sin(theta) P|psi>``."""
    _check_dims(state, p.n_qubits)
    out = state.amplitudes.copy()
    kern.rotate_inplace(out, p.x_mask, p.z_mask, p.phase, float(theta))
    return QubitState(out, unnormalized=not state.normalized)


def apply_operator_sum(state: QubitState, op: OperatorSum) -> QubitState:
    """Return ``H|psi>`` (generally unnormalized)."""
    _check_dims(state, op.n_qubits)
    coeffs, xs, zs, phases = op.arrays()
    out = np.empty_like(state.amplitudes)
    kern.apply_opsum(state.amplitudes, coeffs, xs, zs, phases, out)
    return QubitState(out, unnormalized=True)


def expectation(state: QubitState, op: OperatorSum) -> float:
    """``<psi|H|psi>`` for a normalized state and Hermitian ``op``."""
    _check_dims(state, op.n_qubits)
    if not state.normalized:
        raise ValueError("expectation requires a normalized state")
    coeffs, xs, zs, phases = op.arrays()
    scratch = np.empty_like(state.amplitudes)
    e_re, e_im, _ = kern.h_moments(state.amplitudes, coeffs, xs, zs, phases, scratch)
    if abs(e_im) > 1e-10:
        raise AssertionError(f"imaginary residue {e_im:.3e} in <H>; operator not Hermitian?")
    return e_re


def inner_product(a: QubitState, b: QubitState) -> complex:
    """``<a|b>`` (conjugate-linear in the first argument)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


@dataclass(frozen=True, init=False)
class Bipartition:
    """A subsystem split: ``region_a`` holds 1-based site labels of part A."""

    region_a: frozenset

    def __init__(self, region_a):
        sites = frozenset(int(s) for s in region_a)
        if not sites:
            raise ValueError("region_a must be nonempty")
        if any(s < 1 for s in sites):
            raise ValueError("sites are 1-based positive integers")
        object.__setattr__(self, "region_a", sites)

    def validate(self, n_qubits: int):
        if any(s > n_qubits for s in self.region_a):
            raise ValueError(f"region_a {sorted(self.region_a)} exceeds register size {n_qubits}")
        if len(self.region_a) >= n_qubits:
            raise ValueError("region_a must be a proper subset of the register")

    def complement(self, n_qubits: int) -> "Bipartition":
        self.validate(n_qubits)
        return Bipartition(set(range(1, n_qubits + 1)) - self.region_a)


def half_chain(n_qubits: int) -> Bipartition:
    """The default split: sites 1..floor(N/2)."""
    return Bipartition(range(1, n_qubits // 2 + 1))


def reduced_density_matrix(state: QubitState, part: Bipartition) -> np.ndarray:
    """Partial trace over the complement of ``part.region_a``.

    Row/column index of the result enumerates region-A sites in ascending
    site order, lowest site on the least significant bit.
    """
    n = state.n_qubits
    part.validate(n)
    sites_a = sorted(part.region_a)
    # numpy axis 0 of the reshaped tensor is the most significant bit (site N)
    axes_a = [n - s for s in sites_a]
    axes_b = [ax for ax in range(n) if ax not in axes_a]
    psi = state.amplitudes.reshape([2] * n)
    # ascending axis number = descending site, so the lowest site lands on the
    # fastest-varying bit of the row index
    psi = np.transpose(psi, sorted(axes_a) + axes_b)
    m = psi.reshape(1 << len(sites_a), -1)
    return m @ m.conj().T


def entanglement_entropy(rdm: np.ndarray, *, tol: float = 1e-10) -> float:
    """Von Neumann entropy ``-tr(rho ln rho)`` in nats.

    Eigenvalues below 1e-12 contribute zero; inputs failing Hermiticity,
    positivity or unit trace beyond ``tol`` are rejected.
    """
    rho = np.asarray(rdm)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("density matrix trace differs from 1 beyond tolerance")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3e}")
    p = evals[evals > 1e-12]
    return float(-np.sum(p * np.log(p)))
