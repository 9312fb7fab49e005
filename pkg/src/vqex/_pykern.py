"""Pure-numpy statevector kernels.

Fallback for :mod:`vqex._ckern` with the same call signatures, used when the
compiled extension is unavailable or when ``VQEX_PURE_PYTHON=1``.  Vectorized
over amplitudes; per-(dim, x, z) index/sign tables are memoized since pools
and Hamiltonians reuse a small set of masks millions of times.
"""

from __future__ import annotations

import numpy as np

_PARITY = None  # 16-bit parity lookup, built lazily


def _parity_table():
    global _PARITY
    if _PARITY is None:
        t = np.zeros(1 << 16, dtype=np.uint8)
        for b in range(16):
            t ^= ((np.arange(1 << 16) >> b) & 1).astype(np.uint8)
        _PARITY = t
    return _PARITY


def _parity(values):
    """Elementwise bit parity; masks here never exceed 16 bits (N <= 14)."""
    return _parity_table()[np.asarray(values, dtype=np.int64)]


_tables = {}


def _pauli_table(dim, x, z):
    """(source indices, signs) for P acting on a dim-sized register."""
    key = (dim, x, z)
    tab = _tables.get(key)
    if tab is None:
        idx = np.arange(dim, dtype=np.int64)
        src = idx ^ x
        signs = 1.0 - 2.0 * _parity(src & z)
        tab = (src, signs)
        _tables[key] = tab
    return tab


def _pair_table(dim, x, z):
    """Index pairs (j, k=j^x with k>j) and per-side signs for rotations."""
    key = ("pair", dim, x, z)
    tab = _tables.get(key)
    if tab is None:
        idx = np.arange(dim, dtype=np.int64)
        k = idx ^ x
        sel = k > idx
        j = idx[sel]
        k = k[sel]
        sj = 1.0 - 2.0 * _parity(j & z)  # sign picked up leaving j
        sk = 1.0 - 2.0 * _parity(k & z)
        tab = (j, k, sj, sk)
        _tables[key] = tab
    return tab


def apply_pauli(amps, x_mask, z_mask, phase):
    """Return ``phase * X^x Z^z`` applied to ``amps`` as a new array."""
    src, signs = _pauli_table(amps.shape[0], int(x_mask), int(z_mask))
    return (phase * signs) * amps[src]


def rotate_inplace(amps, x_mask, z_mask, phase, theta):
    """In-place ``amps <- cos(theta) amps + i sin(theta) P amps``."""
    x = int(x_mask)
    z = int(z_mask)
    c = np.cos(theta)
    f = 1j * np.sin(theta) * phase
    if x == 0:
        _, signs = _pauli_table(amps.shape[0], 0, z)
        amps *= c + f * signs
        return
    j, k, sj, sk = _pair_table(amps.shape[0], x, z)
    aj = amps[j].copy()
    ak = amps[k]
    amps[j] = c * aj + (f * sk) * ak
    amps[k] = c * ak + (f * sj) * aj


def apply_opsum(amps, coeffs, xs, zs, phases, out):
    """``out <- sum_t coeffs[t] P_t amps``."""
    out[:] = 0
    for t in range(coeffs.shape[0]):
        src, signs = _pauli_table(amps.shape[0], int(xs[t]), int(zs[t]))
        out += (coeffs[t] * phases[t] * signs) * amps[src]


def h_moments(amps, coeffs, xs, zs, phases, scratch):
    """Return ``(Re<psi|H psi>, Im<psi|H psi>, |H psi|^2)`` using ``scratch``."""
    apply_opsum(amps, coeffs, xs, zs, phases, scratch)
    e = np.vdot(amps, scratch)
    h2 = np.vdot(scratch, scratch).real
    return float(e.real), float(e.imag), float(h2)


def build_state(psi0, op_xs, op_zs, op_phases, thetas, out):
    """``out <- prod_k exp(i thetas[k] P_k) psi0`` applied in list order."""
    out[:] = psi0
    for k in range(thetas.shape[0]):
        rotate_inplace(out, op_xs[k], op_zs[k], op_phases[k], thetas[k])


def ansatz_cost(psi0, op_xs, op_zs, op_phases, thetas, h_coeffs, h_xs, h_zs,
                h_phases, kind, lam, work, hwork):
    """Fused objective: rebuild the ansatz state from psi0 and return its cost."""
    build_state(psi0, op_xs, op_zs, op_phases, thetas, work)
    e_re, _, h2 = h_moments(work, h_coeffs, h_xs, h_zs, h_phases, hwork)
    if kind == 0:
        return h2 - e_re * e_re
    return h2 - 2.0 * lam * e_re + lam * lam
