import numpy as np
import pytest

import edref
from fidzero.errors import DimensionCapError, ParityCommutationError
from fidzero.lattice import (SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams,
                             SparseOperator, build_hamiltonian, parity_eigenvalue,
                             parity_table, sector_operator, sector_project)


def multiset_close(a, b, tol):
    a = np.sort_complex(np.asarray(a))
    b = np.sort_complex(np.asarray(b))
    return a.shape == b.shape and np.max(np.abs(a - b)) <= tol


def test_bond_lists():
    assert LatticeSpec(1, 4).bonds() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert LatticeSpec(1, 2).bonds() == [(0, 1)]        # periodic pair kept once
    assert len(LatticeSpec(2, 2).bonds()) == 8          # 2x2 torus keeps both wraps
    assert len(set(LatticeSpec(2, 2).bonds())) == 4
    assert len(LatticeSpec(2, 3).bonds()) == 18
    for lat in (LatticeSpec(1, 6), LatticeSpec(2, 3)):
        bonds = lat.bonds()
        assert len(bonds) == len(set(bonds))


def test_lattice_validation():
    with pytest.raises(ValueError):
        LatticeSpec(3, 4)
    with pytest.raises(ValueError):
        LatticeSpec(1, 1)
    with pytest.raises(ValueError):
        ModelParams(h=0.5, J=-1.0)


def test_ferromagnet_ground_energy_L3():
    op = build_hamiltonian(LatticeSpec(1, 3), ModelParams(h=0.0))
    w = np.linalg.eigvals(op.to_dense())
    assert abs(w[np.argmin(w.real)] - (-3.0)) < 1e-12


def test_hermitian_for_real_field():
    op = build_hamiltonian(LatticeSpec(1, 3), ModelParams(h=0.7))
    M = op.to_dense()
    assert np.allclose(M, M.conj().T, atol=1e-14)


def test_complex_field_matches_analytic_ground():
    from fidzero.analytic1d import ground_sector
    op = build_hamiltonian(LatticeSpec(1, 4), ModelParams(h=0.5 + 0.5j))
    w = np.linalg.eigvals(op.to_dense())
    dense_min = w[np.argmin(w.real)]
    assert abs(dense_min - ground_sector(4, 0.5 + 0.5j).energy) < 1e-9


def test_matches_independent_reference():
    for (dim, L, h) in ((1, 5, 0.3 - 0.8j), (2, 2, 1.1 + 0.4j)):
        op = build_hamiltonian(LatticeSpec(dim, L), ModelParams(h=h))
        ref = edref.dense_hamiltonian(dim, L, 1.0, h)
        assert np.allclose(op.to_dense(), ref, atol=1e-14)


def test_parity_eigenvalue():
    assert parity_eigenvalue(0b1111, 4) == 1    # all up
    assert parity_eigenvalue(0b1110, 4) == -1   # one down spin
    assert parity_eigenvalue(0b1100, 4) == 1    # two down spins
    with pytest.raises(ValueError):
        parity_eigenvalue(16, 4)


def test_sector_dimensions():
    op = build_hamiltonian(LatticeSpec(1, 2), ModelParams(h=0.3 + 0.1j))
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        block, states = sector_project(op, sector, LatticeSpec(1, 2))
        assert block.dimension == 2
        assert states.size == 2
    block, _ = sector_operator(LatticeSpec(2, 3), ModelParams(h=2.0 + 0.3j), SECTOR_EVEN)
    assert block.dimension == 256


def test_sector_union_is_full_spectrum():
    lat = LatticeSpec(1, 4)
    op = build_hamiltonian(lat, ModelParams(h=0.5))
    full = np.linalg.eigvals(op.to_dense())
    parts = []
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        block, _ = sector_project(op, sector, lat)
        parts.extend(np.linalg.eigvals(block.to_dense()))
    assert multiset_close(full, parts, 1e-10)


def test_sector_operator_matches_projection():
    lat = LatticeSpec(2, 2)
    op = build_hamiltonian(lat, ModelParams(h=0.9 + 0.2j))
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        a, states_a = sector_project(op, sector, lat)
        b, states_b = sector_operator(lat, ModelParams(h=0.9 + 0.2j), sector)
        assert np.array_equal(states_a, states_b)
        assert np.allclose(a.to_dense(), b.to_dense(), atol=1e-14)


@pytest.mark.parametrize("lat", [LatticeSpec(1, L) for L in (2, 4, 5, 8, 12)]
                                + [LatticeSpec(2, 2), LatticeSpec(2, 3)])
def test_commutes_with_parity(lat):
    op = build_hamiltonian(lat, ModelParams(h=0.8 + 0.6j))
    par = parity_table(lat)
    assert np.all(par[op.rows] == par[op.cols])


@pytest.mark.parametrize("lat", [LatticeSpec(1, 8), LatticeSpec(2, 3)])
def test_spectrum_conjugation_symmetry(lat):
    h = 0.6 + 0.4j
    w = np.linalg.eigvals(build_hamiltonian(lat, ModelParams(h=h)).to_dense())
    wc = np.linalg.eigvals(build_hamiltonian(lat, ModelParams(h=h.conjugate())).to_dense())
    assert multiset_close(wc, w.conj(), 1e-10)


@pytest.mark.parametrize("lat", [LatticeSpec(1, 8), LatticeSpec(2, 3)])
def test_field_reversal_symmetry(lat):
    h = 0.6 + 0.4j
    w = np.linalg.eigvals(build_hamiltonian(lat, ModelParams(h=h)).to_dense())
    wr = np.linalg.eigvals(build_hamiltonian(lat, ModelParams(h=-h)).to_dense())
    assert multiset_close(w, wr, 1e-10)


def test_real_field_real_spectrum():
    w = np.linalg.eigvals(build_hamiltonian(LatticeSpec(1, 8), ModelParams(h=0.85)).to_dense())
    assert np.max(np.abs(w.imag)) < 1e-10


def test_square_2x2_ground_with_doubled_bonds():
    # -2J per unordered pair: the torus wrap doubles every 2x2 bond
    op = build_hamiltonian(LatticeSpec(2, 2), ModelParams(h=0.0))
    w = np.linalg.eigvals(op.to_dense())
    assert abs(w[np.argmin(w.real)] - (-8.0)) < 1e-12


def test_dimension_cap():
    with pytest.raises(DimensionCapError):
        build_hamiltonian(LatticeSpec(2, 6), ModelParams(h=0.1))  # 36 sites
    with pytest.raises(DimensionCapError):
        build_hamiltonian(LatticeSpec(1, 10), ModelParams(h=0.1), cap=9)


def test_sector_project_rejects_parity_violation():
    lat = LatticeSpec(1, 4)
    op = build_hamiltonian(lat, ModelParams(h=0.2))
    bad = SparseOperator(op.dimension, op.diagonal,
                         np.append(op.rows, 1), np.append(op.cols, 0),
                         np.append(op.amps, 0.5 + 0j))
    with pytest.raises(ParityCommutationError):
        sector_project(bad, SECTOR_EVEN, lat)


def test_dump_triplets_roundtrip(tmp_path):
    op = build_hamiltonian(LatticeSpec(1, 3), ModelParams(h=0.4 + 0.2j))
    path = tmp_path / "op.txt"
    op.dump_triplets(path)
    M = np.zeros((op.dimension, op.dimension), dtype=complex)
    for line in path.read_text().splitlines():
        r, c, re, im = line.split()
        M[int(r), int(c)] += complex(float(re), float(im))
    assert np.allclose(M, op.to_dense(), atol=1e-15)


def test_matvec_matches_dense():
    rng = np.random.default_rng(3)
    op = build_hamiltonian(LatticeSpec(2, 2), ModelParams(h=1.2 - 0.7j))
    x = rng.normal(size=op.dimension) + 1j * rng.normal(size=op.dimension)
    assert np.allclose(op.matvec(x), op.to_dense() @ x, atol=1e-12)
