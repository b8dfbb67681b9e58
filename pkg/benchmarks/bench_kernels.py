"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--sites 12 14 16]
The package-wide backend is chosen by FIDZERO_DISABLE_NUMBA; here both
implementations are imported directly and timed on identical inputs.
"""

import argparse
import time

import numpy as np

from fidzero import _kernels_numba as knb
from fidzero import _kernels_numpy as knp
from fidzero import kernels
from fidzero.lattice import LatticeSpec


def timeit(fn, *args, repeat=5):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_site_count(n_sites):
    print(f"\nN = {n_sites} sites (dim 2^{n_sites} = {1 << n_sites})")
    masks = np.array([(1 << i) | (1 << j) for (i, j) in LatticeSpec(1, n_sites).bonds()],
                     dtype=np.int64)

    t_nb, (par, _) = timeit(knb.spin_tables, n_sites)
    t_np, (par2, _) = timeit(knp.spin_tables, n_sites)
    assert np.array_equal(par, par2)
    print(f"  spin_tables          numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms"
          f"   speedup {t_np/t_nb:5.1f}x")

    pos_nb, n_even = knb.sector_positions(par, 1)
    states = np.nonzero(pos_nb >= 0)[0].astype(np.int64)
    t_nb, rows_nb = timeit(knb.projected_flip_rows, states, pos_nb, masks)
    t_np, rows_np = timeit(knp.projected_flip_rows, states, pos_nb, masks)
    assert np.array_equal(rows_nb, rows_np)
    print(f"  projected_flip_rows  numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms"
          f"   speedup {t_np/t_nb:5.1f}x")

    rng = np.random.default_rng(0)
    diag = rng.normal(size=n_even) + 1j * rng.normal(size=n_even)
    amps = np.full(rows_nb.size, -1.0, dtype=complex)
    cols = np.tile(np.arange(n_even, dtype=np.int64), masks.size)
    x = rng.normal(size=n_even) + 1j * rng.normal(size=n_even)
    out = np.empty_like(x)
    t_nb, y_nb = timeit(knb.matvec, diag, rows_nb, cols, amps, x, out.copy())
    t_np, y_np = timeit(knp.matvec, diag, rows_nb, cols, amps, x, out.copy())
    assert np.allclose(y_nb, y_np, atol=1e-12)
    print(f"  sector matvec        numba {t_nb*1e3:8.2f} ms   numpy {t_np*1e3:8.2f} ms"
          f"   speedup {t_np/t_nb:5.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sites", type=int, nargs="+", default=[12, 14, 16])
    args = ap.parse_args()
    print(f"package backend in this process: {kernels.backend_name()} "
          f"(set FIDZERO_DISABLE_NUMBA=1 to force numpy)")
    # trigger jit compilation outside the timed region
    knb.spin_tables(4)
    for n in args.sites:
        bench_site_count(n)


if __name__ == "__main__":
    main()
