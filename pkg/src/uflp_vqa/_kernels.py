"""In-place amplitude kernels (numba).

``bit`` arguments are bit positions in the basis index, i.e. ``n - 1 - qubit``.
"""

import numba as nb
import numpy as np

_opts = dict(cache=True, nogil=True)


@nb.njit(inline="always")
def _insert_zero(i, bit):
    low = i & ((1 << bit) - 1)
    return ((i >> bit) << (bit + 1)) | low


@nb.njit(inline="always")
def _insert_two_zeros(i, lo, hi):
    return _insert_zero(_insert_zero(i, lo), hi)


@nb.njit(**_opts)
def apply_2x2(psi, bit, u00, u01, u10, u11):
    stride = 1 << bit
    for i in range(psi.size // 2):
        i0 = _insert_zero(i, bit)
        i1 = i0 | stride
        a = psi[i0]
        b = psi[i1]
        psi[i0] = u00 * a + u01 * b
        psi[i1] = u10 * a + u11 * b


@nb.njit(**_opts)
def apply_ry(psi, bit, c, s):
    stride = 1 << bit
    for i in range(psi.size // 2):
        i0 = _insert_zero(i, bit)
        i1 = i0 | stride
        a = psi[i0]
        b = psi[i1]
        psi[i0] = c * a - s * b
        psi[i1] = s * a + c * b


@nb.njit(**_opts)
def apply_rx(psi, bit, c, s):
    stride = 1 << bit
    ms = -1j * s
    for i in range(psi.size // 2):
        i0 = _insert_zero(i, bit)
        i1 = i0 | stride
        a = psi[i0]
        b = psi[i1]
        psi[i0] = c * a + ms * b
        psi[i1] = ms * a + c * b


@nb.njit(**_opts)
def apply_cnot(psi, cbit, tbit):
    lo, hi = min(cbit, tbit), max(cbit, tbit)
    cmask = 1 << cbit
    tmask = 1 << tbit
    for i in range(psi.size // 4):
        i10 = _insert_two_zeros(i, lo, hi) | cmask
        i11 = i10 | tmask
        tmp = psi[i10]
        psi[i10] = psi[i11]
        psi[i11] = tmp


@nb.njit(**_opts)
def apply_xy(psi, abit, bbit, c, s):
    lo, hi = min(abit, bbit), max(abit, bbit)
    ms = -1j * s
    for i in range(psi.size // 4):
        base = _insert_two_zeros(i, lo, hi)
        i01 = base | (1 << bbit)
        i10 = base | (1 << abit)
        x01 = psi[i01]
        x10 = psi[i10]
        psi[i01] = c * x01 + ms * x10
        psi[i10] = c * x10 + ms * x01


@nb.njit(**_opts)
def apply_phase(psi, table, angle):
    for i in range(psi.size):
        t = -angle * table[i]
        psi[i] *= complex(np.cos(t), np.sin(t))


@nb.njit(**_opts)
def inner_2x2(lam, psi, bit, h00, h01, h10, h11):
    """``<lam| (h on bit) |psi>``."""
    stride = 1 << bit
    acc = 0j
    for i in range(psi.size // 2):
        i0 = _insert_zero(i, bit)
        i1 = i0 | stride
        a = psi[i0]
        b = psi[i1]
        acc += np.conj(lam[i0]) * (h00 * a + h01 * b) + np.conj(lam[i1]) * (h10 * a + h11 * b)
    return acc


@nb.njit(**_opts)
def inner_xy(lam, psi, abit, bbit):
    """``<lam| (X_a X_b + Y_a Y_b) |psi>``."""
    lo, hi = min(abit, bbit), max(abit, bbit)
    acc = 0j
    for i in range(psi.size // 4):
        base = _insert_two_zeros(i, lo, hi)
        i01 = base | (1 << bbit)
        i10 = base | (1 << abit)
        acc += np.conj(lam[i01]) * psi[i10] + np.conj(lam[i10]) * psi[i01]
    return 2.0 * acc


@nb.njit(**_opts)
def inner_diag(lam, psi, table):
    acc = 0j
    for i in range(psi.size):
        acc += np.conj(lam[i]) * table[i] * psi[i]
    return acc
