"""Spin-1/2 Ising Hamiltonians over the bitstring basis, with parity structure.

Model: H = -J * sum_<i,j> sigma^x_i sigma^x_j - h * sum_j sigma^z_j on a
periodic chain or periodic square lattice, with complex transverse field h.

Basis convention: basis state s is an N-bit integer; bit j = 1 means
sigma^z eigenvalue +1 at site j.  2D sites are row-major: site = row*L + col.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import DimensionCapError, ParityCommutationError

DEFAULT_SITE_CAP = 25

EVEN = 1
ODD = -1


@dataclass(frozen=True)
class SectorLabel:
    """Parity sector: eigenvalue of P = prod_j sigma^z_j, +1 (even) or -1 (odd)."""

    parity: int

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be +1 or -1, got {self.parity}")

    @property
    def name(self) -> str:
        return "even" if self.parity == EVEN else "odd"

    def __str__(self):
        return self.name


SECTOR_EVEN = SectorLabel(EVEN)
SECTOR_ODD = SectorLabel(ODD)


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic chain (dimensionality=1, N=L) or square lattice (dimensionality=2, N=L*L)."""

    dimensionality: int
    L: int

    def __post_init__(self):
        if self.dimensionality not in (1, 2):
            raise ValueError("dimensionality must be 1 or 2")
        if self.n_sites < 2:
            raise ValueError("need at least 2 sites")

    @property
    def n_sites(self) -> int:
        return self.L if self.dimensionality == 1 else self.L * self.L

    def bonds(self) -> list:
        """Nearest-neighbor bond list from the directional construction.

        1D: each unordered pair once; for L=2 the two periodic bonds of the
        ring coincide and are merged.  2D: one bond per site and direction,
        kept as a multiset, so the 2x2 torus carries each pair twice (the
        wrap-around partner coincides with the forward one).
        """
        if self.dimensionality == 1:
            pairs = {tuple(sorted((i, (i + 1) % self.L)))
                     for i in range(self.L) if i != (i + 1) % self.L}
            return sorted(pairs)
        L = self.L
        pairs = []
        for r in range(L):
            for c in range(L):
                i = r * L + c
                right = r * L + (c + 1) % L
                down = ((r + 1) % L) * L + c
                for j in (right, down):
                    if i != j:
                        pairs.append(tuple(sorted((i, j))))
        return sorted(pairs)


@dataclass(frozen=True)
class ModelParams:
    """Coupling J > 0 (energy units) and complex transverse field h."""

    h: complex
    J: float = 1.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError("J must be positive")


@dataclass
class SparseOperator:
    """Complex operator with a separate diagonal and a bond-flip off-diagonal part.

    The off-diagonal entries come in mask-major blocks (one permutation per
    flip mask), which keeps matvec collision-free per block.
    """

    dimension: int
    diagonal: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    amps: np.ndarray
    symmetric_pattern: bool = True

    def __post_init__(self):
        if self.rows.size and (self.rows.max() >= self.dimension or self.cols.max() >= self.dimension):
            raise ValueError("entry index out of range")

    def matvec(self, x: np.ndarray, out=None) -> np.ndarray:
        if out is None:
            out = np.empty_like(x)
        return kernels.matvec(self.diagonal, self.rows, self.cols, self.amps, x, out)

    def to_dense(self) -> np.ndarray:
        M = np.zeros((self.dimension, self.dimension), dtype=complex)
        M[np.arange(self.dimension), np.arange(self.dimension)] = self.diagonal
        np.add.at(M, (self.rows, self.cols), self.amps)
        return M

    def to_csr(self) -> sp.csr_matrix:
        n = self.dimension
        coo = sp.coo_matrix(
            (
                np.concatenate([self.diagonal, self.amps]),
                (
                    np.concatenate([np.arange(n), self.rows]),
                    np.concatenate([np.arange(n), self.cols]),
                ),
            ),
            shape=(n, n),
        )
        return coo.tocsr()

    def scale_norm(self) -> float:
        """Max absolute row sum (infinity-norm bound used for shifts/residuals)."""
        rowsum = np.abs(self.diagonal).astype(float)
        np.add.at(rowsum, self.rows, np.abs(self.amps))
        return float(rowsum.max()) if rowsum.size else 0.0

    def dump_triplets(self, path) -> None:
        """Text dump: row col re im, one entry per line, 17 significant digits."""
        with open(path, "w") as f:
            for i in range(self.dimension):
                d = self.diagonal[i]
                if d != 0:
                    f.write(f"{i} {i} {d.real:.17g} {d.imag:.17g}\n")
            for r, c, a in zip(self.rows, self.cols, self.amps):
                f.write(f"{r} {c} {a.real:.17g} {a.imag:.17g}\n")


@lru_cache(maxsize=32)
def _tables(dimensionality: int, L: int):
    lat = LatticeSpec(dimensionality, L)
    parity, mag = kernels.spin_tables(lat.n_sites)
    masks = np.array([(1 << i) | (1 << j) for (i, j) in lat.bonds()], dtype=np.int64)
    return parity, mag, masks


@lru_cache(maxsize=64)
def _sector_structure(dimensionality: int, L: int, parity_val: int):
    parity, mag, masks = _tables(dimensionality, L)
    positions, n = kernels.sector_positions(parity, parity_val)
    states = np.nonzero(positions >= 0)[0].astype(np.int64)
    rows = kernels.projected_flip_rows(states, positions, masks)
    cols = np.tile(np.arange(n, dtype=np.int64), masks.size)
    return states, positions, rows, cols, mag[states].copy()


def check_site_cap(n_sites: int, cap: int = DEFAULT_SITE_CAP) -> None:
    if n_sites > cap:
        raise DimensionCapError(f"{n_sites} sites exceeds the cap of {cap} (2^{n_sites} states)")


def parity_eigenvalue(state: int, n_sites: int) -> int:
    """Eigenvalue of P = prod_j sigma^z_j on a basis state: (-1)^(#down spins)."""
    if state < 0 or state >= (1 << n_sites):
        raise ValueError("state outside the basis")
    ups = bin(state).count("1")
    return 1 if (n_sites - ups) % 2 == 0 else -1


def build_hamiltonian(lattice: LatticeSpec, params: ModelParams, cap: int = DEFAULT_SITE_CAP) -> SparseOperator:
    """Full-space Hamiltonian: diagonal field term plus -J bond flips.

    Diagonal of state s is -h * sum_j (2 b_j - 1); each bond <i,j> connects s
    to s with bits i and j flipped, amplitude -J.  Commutes with parity.
    """
    check_site_cap(lattice.n_sites, cap)
    _, mag, masks = _tables(lattice.dimensionality, lattice.L)
    dim = 1 << lattice.n_sites
    s = np.arange(dim, dtype=np.int64)
    rows = (s[None, :] ^ masks[:, None]).reshape(-1)
    cols = np.tile(s, masks.size)
    amps = np.full(rows.size, -params.J, dtype=complex)
    diag = (-params.h) * mag.astype(complex)
    return SparseOperator(dim, diag, rows, cols, amps)


def parity_table(lattice: LatticeSpec) -> np.ndarray:
    """Parity eigenvalue of every basis state (cached)."""
    return _tables(lattice.dimensionality, lattice.L)[0]


def operator_commutes_with_parity(op: SparseOperator, parity: np.ndarray) -> bool:
    return bool(np.all(parity[op.rows] == parity[op.cols]))


def sector_project(op: SparseOperator, sector: SectorLabel, lattice: LatticeSpec):
    """Restrict op to one parity sector.

    Returns (sector operator, index map from sector indices to full-basis states).
    Raises ParityCommutationError if any off-diagonal entry crosses sectors.
    """
    parity = parity_table(lattice)
    if not operator_commutes_with_parity(op, parity):
        raise ParityCommutationError("operator has entries connecting different parity sectors")
    positions, n = kernels.sector_positions(parity, sector.parity)
    states = np.nonzero(positions >= 0)[0].astype(np.int64)
    keep = parity[op.cols] == sector.parity
    rows = positions[op.rows[keep]]
    cols = positions[op.cols[keep]]
    amps = op.amps[keep]
    diag = op.diagonal[states]
    return SparseOperator(n, diag, rows, cols, amps, op.symmetric_pattern), states


def sector_operator(lattice: LatticeSpec, params: ModelParams, sector: SectorLabel,
                    cap: int = DEFAULT_SITE_CAP) -> tuple:
    """Sector block built directly from cached tables (no full-space detour).

    Equivalent to sector_project(build_hamiltonian(...)) but reuses the
    h-independent flip pattern across calls, which matters for scans.
    """
    check_site_cap(lattice.n_sites, cap)
    states, _, rows, cols, mags = _sector_structure(lattice.dimensionality, lattice.L, sector.parity)
    amps = np.full(rows.size, -params.J, dtype=complex)
    diag = (-params.h) * mags.astype(complex)
    return SparseOperator(states.size, diag, rows, cols, amps), states
