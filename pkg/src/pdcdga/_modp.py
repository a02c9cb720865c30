"""int64 row-reduction kernels for prime fields.

Two interchangeable backends compute the reduced row echelon form of an
integer matrix mod p: a numba-compiled kernel and a vectorized numpy
fallback.  RREF is unique, so both return bit-identical results; the
fallback exists for environments without a working JIT and is selected
by setting PDCDGA_PURE_NUMPY=1.

Entries must lie in [0, p).  p is required to fit in 31 bits so that a
product of two residues stays inside int64.
"""
from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "PDCDGA_PURE_NUMPY"

_jit_rref = None  # compiled lazily on first accelerated call


def use_accelerated() -> bool:
    """True when the numba backend is active (env flag unset, import ok)."""
    if os.environ.get(ENV_FLAG):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a hard dep, but be safe
        return False
    return True


def rref_mod_p(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``mat`` over F_p.

    Returns (rref, pivot_columns).  ``mat`` is not modified.
    """
    if p >= 1 << 31:
        raise ValueError("prime too large for int64 kernels: %d" % p)
    m = np.array(mat, dtype=np.int64, copy=True) % p
    if m.shape[0] == 0 or m.shape[1] == 0:
        return m, []
    if use_accelerated():
        r, piv, rank = _accelerated()(m, p)
        return r, [int(c) for c in piv[:rank]]
    r, piv = _rref_numpy(m, p)
    return r, piv


def _accelerated():
    global _jit_rref
    if _jit_rref is None:
        from numba import njit

        _jit_rref = njit(cache=True)(_rref_loops)
    return _jit_rref


def _rref_loops(m, p):
    # Plain-loop Gauss-Jordan; compiled by numba, never run interpreted.
    rows, cols = m.shape
    piv = np.full(min(rows, cols), -1, dtype=np.int64)
    rank = 0
    for c in range(cols):
        sel = -1
        for r in range(rank, rows):
            if m[r, c] != 0:
                sel = r
                break
        if sel < 0:
            continue
        if sel != rank:
            for j in range(cols):
                tmp = m[rank, j]
                m[rank, j] = m[sel, j]
                m[sel, j] = tmp
        # Fermat inverse: p is prime, m[rank, c] != 0.
        inv = 1
        base = m[rank, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(cols):
            m[rank, j] = (m[rank, j] * inv) % p
        for r in range(rows):
            if r != rank and m[r, c] != 0:
                f = m[r, c]
                for j in range(cols):
                    m[r, j] = (m[r, j] - f * m[rank, j]) % p
        piv[rank] = c
        rank += 1
        if rank == rows:
            break
    return m, piv, rank


def _rref_numpy(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = m.shape
    piv: list[int] = []
    rank = 0
    for c in range(cols):
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        sel = rank + int(nz[0])
        if sel != rank:
            m[[rank, sel]] = m[[sel, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, c]), -1, p)) % p
        col = m[:, c].copy()
        col[rank] = 0
        m -= np.outer(col, m[rank])
        m %= p
        piv.append(c)
        rank += 1
        if rank == rows:
            break
    return m, piv
