"""Mixed-field Ising chain, operator pools and model-level observables.

The chain is ``H = J sum_i Z_i Z_{i+1} + sum_i (h_x X_i + h_z Z_i)`` with
periodic boundaries (site N+1 is site 1).  ``h_z = 0`` is the integrable
transverse-field special case and drops the Z terms entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .pauli import OperatorSum, PauliString
from .state import QubitState, expectation, product_state


@dataclass(frozen=True)
class ModelParams:
    n_qubits: int
    h_x: float
    h_z: float = 0.0
    j: float = 1.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_qubits < 3:
            raise ValueError("chain needs at least 3 sites")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundaries are supported")

    @property
    def integrable(self) -> bool:
        return self.h_z == 0.0


def build_mfim(params: ModelParams) -> OperatorSum:
    """Hamiltonian terms ordered ZZ bonds, then X fields, then Z fields.

    The Z-field family is omitted when ``h_z == 0`` so the integrable chain
    carries 2N terms instead of 3N.
    """
    n = params.n_qubits
    terms = []
    for i in range(1, n + 1):
        j = i % n + 1  # periodic wrap: site N+1 == 1
        terms.append((params.j, PauliString.from_sites(n, {i: "Z", j: "Z"})))
    for i in range(1, n + 1):
        terms.append((params.h_x, PauliString.single(n, i, "X")))
    if params.h_z != 0.0:
        for i in range(1, n + 1):
            terms.append((params.h_z, PauliString.single(n, i, "Z")))
    return OperatorSum(terms)


@dataclass(frozen=True)
class OperatorPool:
    """Ordered, deduplicated generator set; the index in ``operators`` is the
    stable operator id used by ansatz records."""

    kind: str
    operators: tuple

    @property
    def n_qubits(self) -> int:
        return self.operators[0].n_qubits

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, op_id: int) -> PauliString:
        return self.operators[op_id]

    @cached_property
    def arrays(self):
        xs = np.array([p.x_mask for p in self.operators], dtype=np.uint64)
        zs = np.array([p.z_mask for p in self.operators], dtype=np.uint64)
        phases = np.array([p.phase for p in self.operators], dtype=np.complex128)
        return xs, zs, phases


def build_pool(kind: str, n_qubits: int, *, include_diagonal_pairs: bool = False) -> OperatorPool:
    """Generator pools for the adaptive ansatz.

    ``minimal``: {Y_i} then {Y_i Z_{i+1}} with the periodic wrap, 2N operators.
    ``maximal``: {Y_i}, then {Y_i Z_j}, then {Y_i X_j}, two-site families
    ordered lexicographically by (i, j).  Y_i Z_i reduces to X_i and Y_i X_i
    to Z_i; such purely real generators rotate nothing out of a real state,
    so i = j entries are skipped by default.  With
    ``include_diagonal_pairs=True`` the Y_i X_i entries are kept (stored as
    the single-site Z_i they reduce to), giving N + N(N-1) + N^2 operators.
    Duplicated masks are dropped, first occurrence wins.
    """
    if n_qubits < 3:
        raise ValueError("pools are defined for chains of at least 3 sites")
    n = n_qubits
    ops: list[PauliString] = []
    if kind == "minimal":
        for i in range(1, n + 1):
            ops.append(PauliString.single(n, i, "Y"))
        for i in range(1, n + 1):
            j = i % n + 1
            ops.append(PauliString.from_sites(n, {i: "Y", j: "Z"}))
    elif kind == "maximal":
        for i in range(1, n + 1):
            ops.append(PauliString.single(n, i, "Y"))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                ops.append(PauliString.from_sites(n, {i: "Y", j: "Z"}))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    if include_diagonal_pairs:
                        ops.append(PauliString.single(n, i, "Z"))
                    continue
                ops.append(PauliString.from_sites(n, {i: "Y", j: "X"}))
    else:
        raise ValueError(f"unknown pool kind {kind!r}")
    seen = set()
    unique = []
    for p in ops:
        key = (p.x_mask, p.z_mask)
        if key not in seen:
            seen.add(key)
            unique.append(p)
    return OperatorPool(kind=kind, operators=tuple(unique))


def magnetization_density(state: QubitState) -> float:
    """``(1/N) sum_i <Z_i>``, computed from the diagonal weight directly."""
    n = state.n_qubits
    probs = np.abs(state.amplitudes) ** 2
    idx = np.arange(state.dim, dtype=np.uint64)
    ones = np.bitwise_count(idx).astype(np.int64)
    return float(np.sum(probs * (n - 2 * ones)) / n)


def estimate_bandwidth(h: OperatorSum, method: str = "exact_extremes", *,
                       n_restarts: int = 8, seed: int = 0) -> tuple[float, float]:
    """Spectral range (e_min, e_max) of ``h``.

    ``exact_extremes`` diagonalizes densely (the oracle path).
    ``qubit_mean_field`` optimizes <H> over product states with Nelder-Mead
    restarts; by the variational principle its interval is contained in the
    exact one.  If every restart stalls the best found interval is still
    returned.
    """
    if method == "exact_extremes":
        from .oracle import diagonalize

        spec = diagonalize(h)
        return float(spec.energies[0]), float(spec.energies[-1])
    if method != "qubit_mean_field":
        raise ValueError(f"unknown bandwidth method {method!r}")

    from .optimize import SimplexConfig, nelder_mead_minimize

    n = h.n_qubits

    def product_energy(angles):
        return expectation(product_state(angles), h)

    rng = np.random.default_rng(seed)
    cfg = SimplexConfig(f_tol=1e-12, max_evals=4000)
    best_min = np.inf
    best_max = -np.inf
    for _ in range(n_restarts):
        x0 = rng.uniform(0.0, 2.0 * np.pi, size=n)
        lo = nelder_mead_minimize(product_energy, x0, cfg)
        hi = nelder_mead_minimize(lambda a: -product_energy(a), x0, cfg)
        best_min = min(best_min, lo.fun)
        best_max = max(best_max, -hi.fun)
    return float(best_min), float(best_max)
