"""Pure-numpy fallbacks for the hot kernels (same contracts as `_kernels_numba`)."""

import numpy as np


def spin_tables(n_sites):
    dim = 1 << n_sites
    s = np.arange(dim, dtype=np.uint64)
    ups = np.bitwise_count(s).astype(np.int64)
    downs = n_sites - ups
    parity = np.where(downs % 2 == 0, 1, -1).astype(np.int8)
    mag = (2.0 * ups - n_sites).astype(np.float64)
    return parity, mag


def sector_positions(parity, want):
    pos = np.full(parity.size, -1, dtype=np.int64)
    idx = np.nonzero(parity == want)[0]
    pos[idx] = np.arange(idx.size)
    return pos, idx.size


def projected_flip_rows(states, positions, masks):
    # xor with a fixed mask permutes the sector, so each block is collision-free
    tgt = states[None, :] ^ masks[:, None]
    return positions[tgt].reshape(-1)


def matvec(diag, rows, cols, amps, x, out):
    np.multiply(diag, x, out=out)
    n = x.size
    nblocks = rows.size // n
    if nblocks * n == rows.size:
        # mask-major blocks are permutations: safe for fancy-index accumulation
        for m in range(nblocks):
            sl = slice(m * n, (m + 1) * n)
            out[rows[sl]] += amps[sl] * x[cols[sl]]
    else:
        np.add.at(out, rows, amps * x[cols])
    return out
