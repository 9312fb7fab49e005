# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels.

Hot loops for Pauli-string application, Pauli rotations, operator sums and
the fused ansatz-rebuild cost evaluation.  Mirrors the pure-numpy module
``_pykern``; the dispatcher ``_kernels`` picks whichever is importable.

Masks follow the package convention: the stored operator is
``phase * X^x * Z^z`` with ``phase = i**|x & z|`` supplied by the caller,
and ``(X^x Z^z)|b> = (-1)^parity(b & z) |b ^ x>``.
"""

from libc.math cimport cos, sin, sqrt

import numpy as np

ctypedef unsigned long long u64
ctypedef double complex cplx

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define VQEX_PARITY(x) __builtin_parityll(x)
    #else
    static int VQEX_PARITY(unsigned long long x) {
        int p = 0;
        while (x) { p ^= (int)(x & 1ULL); x >>= 1; }
        return p;
    }
    #endif
    """
    int VQEX_PARITY(u64 x) nogil


cdef inline void _pauli_into(const cplx[::1] src, cplx[::1] dst,
                             u64 x, u64 z, cplx phase) noexcept nogil:
    # dst = phase * X^x Z^z src
    cdef Py_ssize_t dim = src.shape[0]
    cdef Py_ssize_t j
    cdef u64 b
    for j in range(dim):
        b = (<u64>j) ^ x
        if VQEX_PARITY(b & z):
            dst[j] = -phase * src[b]
        else:
            dst[j] = phase * src[b]


cdef inline void _rotate(cplx[::1] a, u64 x, u64 z, cplx phase,
                         double theta) noexcept nogil:
    # a <- cos(theta) a + i sin(theta) P a, in place
    cdef Py_ssize_t dim = a.shape[0]
    cdef double c = cos(theta)
    cdef double s = sin(theta)
    cdef cplx f = 1j * s * phase
    cdef Py_ssize_t j
    cdef u64 k
    cdef cplx aj, ak
    if x == 0:
        for j in range(dim):
            if VQEX_PARITY((<u64>j) & z):
                a[j] = a[j] * (c - f)
            else:
                a[j] = a[j] * (c + f)
        return
    for j in range(dim):
        k = (<u64>j) ^ x
        if k > <u64>j:
            aj = a[j]
            ak = a[k]
            if VQEX_PARITY(k & z):
                a[j] = c * aj - f * ak
            else:
                a[j] = c * aj + f * ak
            if VQEX_PARITY((<u64>j) & z):
                a[k] = c * ak - f * aj
            else:
                a[k] = c * ak + f * aj


cdef inline void _opsum(const cplx[::1] src, cplx[::1] dst,
                        const double[::1] coeffs, const u64[::1] xs,
                        const u64[::1] zs, const cplx[::1] phases) noexcept nogil:
    cdef Py_ssize_t dim = src.shape[0]
    cdef Py_ssize_t nt = coeffs.shape[0]
    cdef Py_ssize_t j, t
    cdef u64 x, z, b
    cdef cplx w
    for j in range(dim):
        dst[j] = 0
    for t in range(nt):
        x = xs[t]
        z = zs[t]
        w = coeffs[t] * phases[t]
        for j in range(dim):
            b = (<u64>j) ^ x
            if VQEX_PARITY(b & z):
                dst[j] = dst[j] - w * src[b]
            else:
                dst[j] = dst[j] + w * src[b]


cdef inline void _moments(const cplx[::1] psi, const cplx[::1] hpsi,
                          double* e_re, double* e_im, double* h2) noexcept nogil:
    cdef Py_ssize_t dim = psi.shape[0]
    cdef double er = 0.0, ei = 0.0, n2 = 0.0
    cdef Py_ssize_t j
    cdef cplx p, hp
    for j in range(dim):
        p = psi[j]
        hp = hpsi[j]
        er += p.real * hp.real + p.imag * hp.imag
        ei += p.real * hp.imag - p.imag * hp.real
        n2 += hp.real * hp.real + hp.imag * hp.imag
    e_re[0] = er
    e_im[0] = ei
    h2[0] = n2


def apply_pauli(cplx[::1] amps, x_mask, z_mask, phase):
    """Return ``phase * X^x Z^z`` applied to ``amps`` as a new array."""
    out = np.empty(amps.shape[0], dtype=np.complex128)
    cdef cplx[::1] dst = out
    _pauli_into(amps, dst, <u64>x_mask, <u64>z_mask, <cplx>phase)
    return out


def rotate_inplace(cplx[::1] amps, x_mask, z_mask, phase, double theta):
    """In-place ``amps <- cos(theta) amps + i sin(theta) P amps``."""
    _rotate(amps, <u64>x_mask, <u64>z_mask, <cplx>phase, theta)


def apply_opsum(cplx[::1] amps, const double[::1] coeffs, const u64[::1] xs,
                const u64[::1] zs, const cplx[::1] phases, cplx[::1] out):
    """``out <- sum_t coeffs[t] P_t amps``."""
    _opsum(amps, out, coeffs, xs, zs, phases)


def h_moments(cplx[::1] amps, const double[::1] coeffs, const u64[::1] xs,
              const u64[::1] zs, const cplx[::1] phases, cplx[::1] scratch):
    """Return ``(Re<psi|H psi>, Im<psi|H psi>, |H psi|^2)`` using ``scratch``."""
    cdef double er, ei, h2
    _opsum(amps, scratch, coeffs, xs, zs, phases)
    _moments(amps, scratch, &er, &ei, &h2)
    return er, ei, h2


def build_state(const cplx[::1] psi0, const u64[::1] op_xs, const u64[::1] op_zs,
                const cplx[::1] op_phases, const double[::1] thetas,
                cplx[::1] out):
    """``out <- prod_k exp(i thetas[k] P_k) psi0`` applied in list order."""
    cdef Py_ssize_t dim = psi0.shape[0]
    cdef Py_ssize_t nk = thetas.shape[0]
    cdef Py_ssize_t j, k
    for j in range(dim):
        out[j] = psi0[j]
    for k in range(nk):
        _rotate(out, op_xs[k], op_zs[k], op_phases[k], thetas[k])


def ansatz_cost(const cplx[::1] psi0, const u64[::1] op_xs, const u64[::1] op_zs,
                const cplx[::1] op_phases, const double[::1] thetas,
                const double[::1] h_coeffs, const u64[::1] h_xs,
                const u64[::1] h_zs, const cplx[::1] h_phases,
                int kind, double lam, cplx[::1] work, cplx[::1] hwork):
    """Fused objective: rebuild the ansatz state from psi0 and return its cost.

    ``kind`` 0 is the energy variance ``<H^2> - <H>^2``; kind 1 is the folded
    cost ``<H^2> - 2 lam <H> + lam^2``.
    """
    cdef Py_ssize_t dim = psi0.shape[0]
    cdef Py_ssize_t nk = thetas.shape[0]
    cdef Py_ssize_t j, k
    cdef double er, ei, h2
    with nogil:
        for j in range(dim):
            work[j] = psi0[j]
        for k in range(nk):
            _rotate(work, op_xs[k], op_zs[k], op_phases[k], thetas[k])
        _opsum(work, hwork, h_coeffs, h_xs, h_zs, h_phases)
        _moments(work, hwork, &er, &ei, &h2)
    if kind == 0:
        return h2 - er * er
    return h2 - 2.0 * lam * er + lam * lam
