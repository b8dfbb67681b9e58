"""Minimal-real-part eigenpairs of parity-sector blocks.

Dense LAPACK path below a dimension cutoff; above it, an implicitly restarted
Arnoldi iteration on the shifted operator (c*I - H) with a dominant real
shift, targeting largest magnitude.  Candidates are certified by explicit
matvec residuals and compared by real part; no spectral assumptions are made
beyond that certificate.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverError
from .lattice import (SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams,
                      SectorLabel, SparseOperator, sector_operator)


@dataclass(frozen=True)
class SolverConfig:
    dense_cutoff: int = 4096
    subspace_dim: int = 60
    max_restarts: int = 300
    tol: float = 1e-9
    degeneracy_tol: float = 1e-10
    n_candidates: int = 6

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.subspace_dim < 10:
            raise ValueError("subspace_dim must be >= 10")
        if self.n_candidates < 3:
            raise ValueError("need at least 3 candidates for the real-part comparison")


@dataclass
class EigenResult:
    value: complex
    vector: Optional[np.ndarray] = None
    residual: Optional[float] = None
    degenerate: bool = False
    converged: bool = True


def _fix_phase(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    pivot = v[np.argmax(np.abs(v))]
    return v * (abs(pivot) / pivot)


def _explicit_residual(op: SparseOperator, value: complex, v: np.ndarray, scale: float) -> float:
    r = op.matvec(v) - value * v
    return float(np.linalg.norm(r) / max(scale, 1.0))


def _dense_path(op: SparseOperator, cfg: SolverConfig, want_vector: bool) -> EigenResult:
    if want_vector:
        M = op.to_dense()
        w, V = np.linalg.eig(M)
    else:
        w = np.linalg.eigvals(op.to_dense())
        V = None
    order = np.argsort(w.real)
    i = order[0]
    degenerate = len(order) > 1 and abs(w[order[1]].real - w[i].real) < cfg.degeneracy_tol
    if V is None:
        return EigenResult(complex(w[i]), None, None, degenerate, True)
    v = _fix_phase(V[:, i])
    res = _explicit_residual(op, w[i], v, op.scale_norm())
    return EigenResult(complex(w[i]), v, res, degenerate, True)


def _iterative_path(op: SparseOperator, cfg: SolverConfig, want_vector: bool,
                    v0: Optional[np.ndarray] = None) -> EigenResult:
    n = op.dimension
    scale = op.scale_norm()
    c = 1.0 + scale
    A = sp.eye(n, format="csr", dtype=complex) * c - op.to_csr()
    k = min(cfg.n_candidates, n - 2)
    if k < 1:
        return _dense_path(op, cfg, want_vector)
    ncv = min(n, max(cfg.subspace_dim, 2 * k + 2))
    if v0 is None:
        v0 = np.ones(n, dtype=complex)
    v0 = v0 / np.linalg.norm(v0)
    try:
        mu, W = spla.eigs(A, k=k, which="LM", ncv=ncv, tol=cfg.tol,
                          maxiter=cfg.max_restarts, v0=v0)
    except spla.ArpackNoConvergence as e:
        best = None
        if e.eigenvalues is not None and len(e.eigenvalues):
            vals = c - e.eigenvalues
            best = min(_explicit_residual(op, lam, _fix_phase(e.eigenvectors[:, j]), scale)
                       for j, lam in enumerate(vals))
        raise SolverError(f"Arnoldi iteration did not converge in {cfg.max_restarts} iterations",
                          best_residual=best) from e
    lams = c - mu
    residuals = np.array([_explicit_residual(op, lams[j], W[:, j] / np.linalg.norm(W[:, j]), scale)
                          for j in range(len(lams))])
    ok = residuals <= cfg.tol
    if not np.any(ok):
        raise SolverError("no candidate met the residual bound", best_residual=float(residuals.min()))
    cand = np.nonzero(ok)[0]
    order = cand[np.argsort(lams[cand].real)]
    i = order[0]
    degenerate = len(order) > 1 and abs(lams[order[1]].real - lams[i].real) < cfg.degeneracy_tol
    v = _fix_phase(W[:, i])
    result = EigenResult(complex(lams[i]), v if want_vector else None,
                         float(residuals[i]), degenerate, True)
    return result


def min_real_eigenpair(op: SparseOperator, cfg: SolverConfig = SolverConfig(),
                       want_vector: bool = False, method: str = "auto",
                       v0: Optional[np.ndarray] = None) -> EigenResult:
    """Eigenvalue of op with minimal real part, optionally with its right vector.

    method: "auto" picks dense below cfg.dense_cutoff, else iterative;
    "dense"/"iterative" force a path.  The iterative path runs Arnoldi on
    (c*I - op) with c = 1 + max abs row sum, targets largest magnitude, and
    certifies candidates by explicit residuals before the real-part selection.
    """
    if op.dimension < 1:
        raise ValueError("empty operator")
    if method == "dense" or (method == "auto" and op.dimension <= cfg.dense_cutoff):
        return _dense_path(op, cfg, want_vector)
    if method not in ("auto", "iterative"):
        raise ValueError(f"unknown method {method!r}")
    return _iterative_path(op, cfg, want_vector, v0=v0)


def ground_by_sector(lattice: LatticeSpec, params: ModelParams,
                     cfg: SolverConfig = SolverConfig(), want_vector: bool = False,
                     method: str = "auto", cap: int = 25,
                     v0s: Optional[Dict[int, np.ndarray]] = None) -> Dict[int, EigenResult]:
    """Ground EigenResult of both parity sectors, keyed by sector parity (+1/-1)."""
    out = {}
    for sector in (SECTOR_EVEN, SECTOR_ODD):
        op, _ = sector_operator(lattice, params, sector, cap=cap)
        v0 = (v0s or {}).get(sector.parity)
        try:
            out[sector.parity] = min_real_eigenpair(op, cfg, want_vector, method, v0=v0)
        except SolverError as e:
            raise SolverError(f"{sector.name} sector: {e}", best_residual=e.best_residual) from e
    return out


def fidelity_numeric(v: np.ndarray, v_prime: np.ndarray) -> float:
    """|<v'|v>| for unit vectors; invariant under a global phase of either."""
    if v.shape != v_prime.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {v_prime.shape}")
    return float(abs(np.vdot(v_prime, v)))


def dump_vector(path, v: np.ndarray) -> None:
    """Binary dump: int64 dimension then interleaved re/im float64, little-endian."""
    with open(path, "wb") as f:
        np.array([v.size], dtype="<i8").tofile(f)
        inter = np.empty(2 * v.size, dtype="<f8")
        inter[0::2] = v.real
        inter[1::2] = v.imag
        inter.tofile(f)


def load_vector(path) -> np.ndarray:
    with open(path, "rb") as f:
        n = int(np.fromfile(f, dtype="<i8", count=1)[0])
        inter = np.fromfile(f, dtype="<f8", count=2 * n)
    return inter[0::2] + 1j * inter[1::2]
