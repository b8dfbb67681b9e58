import numpy as np
import pytest

from fidzero import analytic1d as a1
from fidzero.errors import SolverError
from fidzero.eigensolver import (EigenResult, SolverConfig, dump_vector,
                                 fidelity_numeric, ground_by_sector, load_vector,
                                 min_real_eigenpair)
from fidzero.lattice import (SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams,
                             SparseOperator, sector_operator)


def diag_operator(values):
    values = np.asarray(values, dtype=complex)
    empty = np.array([], dtype=np.int64)
    return SparseOperator(values.size, values, empty, empty,
                          np.array([], dtype=complex))


def test_diagonal_operator():
    op = diag_operator([1 + 2j, -3, 0.5])
    r = min_real_eigenpair(op, want_vector=True)
    assert abs(r.value - (-3)) < 1e-14
    assert np.allclose(np.abs(r.vector), [0, 1, 0], atol=1e-12)
    assert r.vector[1].real > 0          # fixed phase


def test_degenerate_flag():
    r = min_real_eigenpair(diag_operator([-3, -3 + 1e-12j, 1]))
    assert r.degenerate


def test_sector_blocks_match_analytic():
    h = 0.7 + 0.2j
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, _ = sector_operator(LatticeSpec(1, 8), ModelParams(h=h), sector)
        r = min_real_eigenpair(op, want_vector=True)
        assert abs(r.value - a1.sector_ground_energy(8, h, sector=sector)) < 1e-9
        assert abs(np.linalg.norm(r.vector) - 1.0) < 1e-12
        assert r.residual <= 1e-9


def test_iterative_matches_dense_small_lattice():
    cfg = SolverConfig(subspace_dim=10, n_candidates=3)
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, _ = sector_operator(LatticeSpec(2, 2), ModelParams(h=0.9 + 0.4j), sector)
        dense = min_real_eigenpair(op, cfg, method="dense")
        it = min_real_eigenpair(op, cfg, method="iterative")
        assert abs(dense.value - it.value) < 1e-9


@pytest.mark.parametrize("lat,dim", [(LatticeSpec(1, 10), 512), (LatticeSpec(2, 3), 256)])
def test_dense_iterative_agreement(lat, dim):
    cfg = SolverConfig()
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, _ = sector_operator(lat, ModelParams(h=1.1 + 0.35j), sector)
        assert op.dimension == dim
        dense = min_real_eigenpair(op, cfg, method="dense")
        it = min_real_eigenpair(op, cfg, method="iterative")
        assert abs(dense.value - it.value) <= 1e-8 * (1 + abs(dense.value))


def test_ground_by_sector_structure():
    res = ground_by_sector(LatticeSpec(2, 3), ModelParams(h=2.0 + 0.3j))
    assert set(res) == {SECTOR_EVEN.parity, SECTOR_ODD.parity}
    for r in res.values():
        assert isinstance(r, EigenResult) and r.converged


def test_gap_sign_crossing_via_ed():
    gaps = []
    for x in np.linspace(0.2, 1.2, 9):
        res = ground_by_sector(LatticeSpec(1, 10), ModelParams(h=complex(x, 0.5)))
        gaps.append(res[SECTOR_EVEN.parity].value.real - res[SECTOR_ODD.parity].value.real)
    signs = np.sign(gaps)
    assert np.sum(signs[:-1] * signs[1:] < 0) >= 1


def test_square_2x2_ferromagnetic_value():
    res = ground_by_sector(LatticeSpec(2, 2), ModelParams(h=0.0))
    best = min(r.value.real for r in res.values())
    assert abs(best - (-8.0)) < 1e-12


def test_residual_certificate():
    cfg = SolverConfig()
    op, _ = sector_operator(LatticeSpec(2, 3), ModelParams(h=2.2 + 0.4j), SECTOR_ODD)
    for method in ("dense", "iterative"):
        r = min_real_eigenpair(op, cfg, want_vector=True, method=method)
        recheck = np.linalg.norm(op.matvec(r.vector) - r.value * r.vector) / op.scale_norm()
        assert recheck <= max(cfg.tol, 2 * r.residual)


def test_hermitian_limit_real_value():
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, _ = sector_operator(LatticeSpec(1, 10), ModelParams(h=0.8), sector)
        r = min_real_eigenpair(op)
        assert abs(r.value.imag) <= 1e-9 * (1 + abs(r.value))


def test_cross_sector_vectors_orthogonal():
    lat = LatticeSpec(1, 8)
    params = ModelParams(h=0.6 + 0.3j)
    embedded = {}
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, states = sector_operator(lat, params, sector)
        r = min_real_eigenpair(op, want_vector=True)
        full = np.zeros(1 << lat.n_sites, dtype=complex)
        full[states] = r.vector
        embedded[sector.parity] = full
    overlap = abs(np.vdot(embedded[1], embedded[-1]))
    assert overlap <= 1e-12


def test_nonconvergence_raises_with_residual():
    cfg = SolverConfig(tol=1e-30, max_restarts=1)
    op, _ = sector_operator(LatticeSpec(2, 3), ModelParams(h=2.0 + 0.3j), SECTOR_EVEN)
    with pytest.raises(SolverError) as err:
        min_real_eigenpair(op, cfg, method="iterative")
    assert err.value.best_residual is None or err.value.best_residual > 0


def test_fidelity_numeric():
    rng = np.random.default_rng(2)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    assert abs(fidelity_numeric(v, v) - 1.0) < 1e-14
    assert abs(fidelity_numeric(v, np.exp(0.7j) * v) - 1.0) < 1e-14
    e0, e1 = np.eye(8, dtype=complex)[0], np.eye(8, dtype=complex)[1]
    assert fidelity_numeric(e0, e1) == 0.0
    with pytest.raises(ValueError):
        fidelity_numeric(v, v[:4])


def test_vector_dump_roundtrip(tmp_path):
    rng = np.random.default_rng(4)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    path = tmp_path / "vec.bin"
    dump_vector(path, v)
    assert np.allclose(load_vector(path), v, atol=0)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(subspace_dim=5)
    with pytest.raises(ValueError):
        SolverConfig(n_candidates=2)
