"""Numba-compiled hot kernels over the 2^N bitstring basis.

Mirrors the signatures in `_kernels_numpy`; selection happens in `kernels`.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def spin_tables(n_sites):
    """Per-basis-state parity (+1/-1) and total magnetization sum(2*b_j - 1)."""
    dim = 1 << n_sites
    parity = np.empty(dim, dtype=np.int8)
    mag = np.empty(dim, dtype=np.float64)
    for s in range(dim):
        ups = 0
        t = s
        while t:
            t &= t - 1
            ups += 1
        downs = n_sites - ups
        parity[s] = 1 if downs % 2 == 0 else -1
        mag[s] = 2.0 * ups - n_sites
    return parity, mag


@njit(cache=True)
def sector_positions(parity, want):
    """Map full-basis index -> sector index (-1 outside the sector)."""
    pos = np.full(parity.size, -1, dtype=np.int64)
    j = 0
    for s in range(parity.size):
        if parity[s] == want:
            pos[s] = j
            j += 1
    return pos, j


@njit(cache=True)
def projected_flip_rows(states, positions, masks):
    """Row indices of the bond-flip pattern restricted to one parity sector.

    Entry layout is mask-major: block m holds rows for column j = sector
    state j flipped by masks[m].
    """
    n = states.size
    out = np.empty(n * masks.size, dtype=np.int64)
    for m in range(masks.size):
        base = m * n
        mask = masks[m]
        for j in range(n):
            out[base + j] = positions[states[j] ^ mask]
    return out


@njit(cache=True)
def matvec(diag, rows, cols, amps, x, out):
    """out = diag*x + sum of off-diagonal scatter; fixed order, deterministic."""
    for i in range(x.size):
        out[i] = diag[i] * x[i]
    for e in range(rows.size):
        out[rows[e]] += amps[e] * x[cols[e]]
    return out
