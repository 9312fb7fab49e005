"""CNOT-count estimates for converged ans"atze under three connectivities.

Each weight-2 Pauli rotation compiles to a 2-CNOT core (basis changes are
free one-qubit gates); when the two sites are not adjacent on the device
graph, SWAP chains route them together and back, three CNOTs per SWAP and
``d - 1`` SWAPs each way for graph distance ``d``.  Weight-1 rotations are
free.  Consecutive repetitions of the same generator merge into a single
rotation before counting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import OperatorPool
from .pauli import PauliString

CONNECTIVITY_KINDS = ("nn_obc", "nn_pbc", "all_to_all")


@dataclass(frozen=True)
class ConnectivityModel:
    """Device graph: a line (nn_obc), a ring (nn_pbc) or a complete graph."""

    kind: str
    n_qubits: int

    def __post_init__(self):
        if self.kind not in CONNECTIVITY_KINDS:
            raise ValueError(f"unknown connectivity {self.kind!r}")
        if self.n_qubits < 2:
            raise ValueError("need at least 2 qubits")

    def distance(self, i: int, j: int) -> int:
        """Graph distance between 1-based sites."""
        for s in (i, j):
            if not 1 <= s <= self.n_qubits:
                raise ValueError(f"site {s} outside 1..{self.n_qubits}")
        if i == j:
            return 0
        if self.kind == "all_to_all":
            return 1
        span = abs(i - j)
        if self.kind == "nn_pbc":
            return min(span, self.n_qubits - span)
        return span


def cnot_count_step(p: PauliString, conn: ConnectivityModel) -> int:
    """CNOTs for one rotation ``exp(i theta P)`` of a weight-1 or weight-2 P."""
    if p.n_qubits != conn.n_qubits:
        raise ValueError("dimension mismatch between operator and connectivity")
    support = p.support
    if len(support) <= 1:
        return 0
    if len(support) > 2:
        raise ValueError(f"only weight <= 2 rotations are supported, got weight {len(support)}")
    d = conn.distance(*support)
    return 2 + 6 * (d - 1)


def merge_consecutive(ansatz) -> list[tuple[int, float]]:
    """Collapse runs of the same generator into one step with summed angle."""
    merged: list[tuple[int, float]] = []
    for op_id, theta in ansatz:
        if merged and merged[-1][0] == op_id:
            merged[-1] = (op_id, merged[-1][1] + theta)
        else:
            merged.append((op_id, theta))
    return merged


def cnot_count_ansatz(ansatz, pool: OperatorPool, conn: ConnectivityModel) -> int:
    """Total CNOTs of a recorded (op_id, theta) ansatz after merging."""
    return sum(cnot_count_step(pool[op_id], conn) for op_id, _ in merge_consecutive(ansatz))
