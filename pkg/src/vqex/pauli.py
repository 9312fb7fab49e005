"""Pauli strings and weighted Pauli sums on a register of N qubits.

Bit conventions, fixed here and used everywhere in this package:

* Sites are labeled 1..N and site ``i`` lives at bit ``i - 1`` of a basis
  index, so site 1 is the least significant bit and ``|00...0>`` is index 0.
* A Pauli string is a pair of masks: bit ``i - 1`` of ``x_mask`` is set when
  site ``i`` carries X or Y, and of ``z_mask`` when it carries Z or Y.  Y is
  both bits set, identity is neither.
* The operator encoded by ``(x, z)`` is ``i**|y| * X^x * Z^z`` with
  ``y = x & z``.  The ``i**|y|`` phase makes every mask pair Hermitian and
  an involution, so rotations reduce to ``exp(i t P) = cos t + i sin t P``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

_AXIS_FOR_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FOR_AXIS = {v: k for k, v in _AXIS_FOR_BITS.items()}


@dataclass(frozen=True)
class PauliString:
    """An N-qubit tensor product of {I, X, Y, Z} encoded as two bit masks."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError(
                f"mask has bits outside the {self.n_qubits}-qubit register: "
                f"x={self.x_mask:#x} z={self.z_mask:#x}"
            )

    @property
    def y_mask(self) -> int:
        return self.x_mask & self.z_mask

    @cached_property
    def phase(self) -> complex:
        """The Hermitizing prefactor ``i**|y|``."""
        return 1j ** (bin(self.y_mask).count("1") % 4)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return bin(self.x_mask | self.z_mask).count("1")

    @property
    def support(self) -> tuple[int, ...]:
        """Sites (1-based, ascending) carrying a non-identity factor."""
        m = self.x_mask | self.z_mask
        return tuple(i + 1 for i in range(self.n_qubits) if (m >> i) & 1)

    def axis(self, site: int) -> str:
        """Letter at 1-based ``site``: one of I, X, Y, Z."""
        if not 1 <= site <= self.n_qubits:
            raise ValueError(f"site {site} outside 1..{self.n_qubits}")
        b = site - 1
        return _AXIS_FOR_BITS[((self.x_mask >> b) & 1, (self.z_mask >> b) & 1)]

    def label(self) -> str:
        """Compact label such as ``Y1Z3``; identity renders as ``I``."""
        parts = [f"{self.axis(i)}{i}" for i in self.support]
        return "".join(parts) if parts else "I"

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def single(cls, n_qubits: int, site: int, axis: str) -> "PauliString":
        """One-site Pauli ``axis`` in {X, Y, Z} at 1-based ``site``."""
        if not 1 <= site <= n_qubits:
            raise ValueError(f"site {site} outside 1..{n_qubits}")
        try:
            xb, zb = _BITS_FOR_AXIS[axis.upper()]
        except KeyError:
            raise ValueError(f"unknown Pauli axis {axis!r}") from None
        b = site - 1
        return cls(n_qubits, xb << b, zb << b)

    @classmethod
    def from_sites(cls, n_qubits: int, factors: dict[int, str]) -> "PauliString":
        """Build from a {site: axis} mapping, e.g. ``{1: "Y", 3: "Z"}``."""
        x = z = 0
        for site, axis in factors.items():
            if not 1 <= site <= n_qubits:
                raise ValueError(f"site {site} outside 1..{n_qubits}")
            xb, zb = _BITS_FOR_AXIS[axis.upper()]
            x |= xb << (site - 1)
            z |= zb << (site - 1)
        return cls(n_qubits, x, z)

    def __str__(self) -> str:
        return self.label()


class OperatorSum:
    """A Hermitian operator as a weighted list of Pauli strings.

    Coefficients must be real; together with the Hermitian mask convention
    of :class:`PauliString` this keeps every OperatorSum Hermitian.
    """

    def __init__(self, terms):
        terms = tuple((float(c), p) for c, p in terms)
        if terms:
            n = terms[0][1].n_qubits
            for c, p in terms:
                if p.n_qubits != n:
                    raise ValueError("all terms must share n_qubits")
            self._n_qubits = n
        else:
            raise ValueError("OperatorSum needs at least one term; use a zero "
                             "coefficient for an explicit null operator")
        self.terms = terms
        self._arrays = None

    @property
    def n_qubits(self) -> int:
        return self._n_qubits

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def arrays(self):
        """Struct-of-arrays view (coeffs, x_masks, z_masks, phases) for kernels."""
        if self._arrays is None:
            coeffs = np.array([c for c, _ in self.terms], dtype=np.float64)
            xs = np.array([p.x_mask for _, p in self.terms], dtype=np.uint64)
            zs = np.array([p.z_mask for _, p in self.terms], dtype=np.uint64)
            phases = np.array([p.phase for _, p in self.terms], dtype=np.complex128)
            self._arrays = (coeffs, xs, zs, phases)
        return self._arrays

    def is_real(self) -> bool:
        """True when the matrix is real in the computational basis (no Y factors)."""
        return all(p.y_mask == 0 for _, p in self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}*{p.label()}" for c, p in self.terms[:4])
        more = f" + ... ({self.n_terms} terms)" if self.n_terms > 4 else ""
        return f"OperatorSum({body}{more})"
