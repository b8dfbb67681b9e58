"""Fidelity zeros as ground-sector-switch points of the real-part energy gap.

Zeros are located from sign changes of s(h) = Re(E_even) - Re(E_odd) on scan
grids (horizontal lines in the h plane, or fugacity circles h = g e^{i theta})
and refined by bisection.  Eigenvalues only; no fidelity thresholding.
"""

import cmath
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic1d
from .errors import EmptyZeroSetError
from .eigensolver import SolverConfig, ground_by_sector
from .lattice import SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams, SectorLabel

HL_TIE_TOL = 1e-9


@dataclass
class ZeroPoint:
    h: complex
    bracket_width: float
    source: str                      # "line" | "circle"
    sectors: Tuple[SectorLabel, SectorLabel]
    theta: Optional[float] = None    # set for circle scans
    degenerate: bool = False


@dataclass
class EdgeReport:
    g: float
    theta_edge_numeric: Optional[float]
    theta_edge_analytic: Optional[float]
    gap_present: bool


class GapEvaluator:
    """Maps complex h to s(h) = Re(E_0^even) - Re(E_0^odd) for one model."""

    def __init__(self, lattice: LatticeSpec, J: float = 1.0):
        self.lattice = lattice
        self.J = J

    def __call__(self, h: complex) -> float:
        raise NotImplementedError

    def energies(self, h: complex) -> Tuple[complex, complex]:
        """(E_0^even, E_0^odd) at h."""
        raise NotImplementedError

    def sector_of(self, s: float) -> SectorLabel:
        return SECTOR_ODD if s > 0 else SECTOR_EVEN


class AnalyticGapEvaluator(GapEvaluator):
    """Free-fermion gap for the periodic chain (even L)."""

    def __init__(self, L: int, J: float = 1.0):
        super().__init__(LatticeSpec(1, L), J)

    def __call__(self, h: complex) -> float:
        return analytic1d.real_gap(self.lattice.L, h, self.J)

    def energies(self, h: complex):
        return (analytic1d.sector_ground_energy(self.lattice.L, h, self.J, SECTOR_EVEN),
                analytic1d.sector_ground_energy(self.lattice.L, h, self.J, SECTOR_ODD))


class EDGapEvaluator(GapEvaluator):
    """Sector-ED gap for chains or square lattices.

    Reuses the cached flip pattern across h and warm-starts the iterative
    solver from the previous sector eigenvectors.  One instance is meant to be
    driven by a single thread.
    """

    def __init__(self, lattice: LatticeSpec, J: float = 1.0,
                 cfg: SolverConfig = SolverConfig(), cap: int = 25):
        super().__init__(lattice, J)
        self.cfg = cfg
        self.cap = cap
        self._v0s = {}
        self._iterative = (1 << (lattice.n_sites - 1)) > cfg.dense_cutoff

    def _solve(self, h: complex):
        want_vec = self._iterative
        res = ground_by_sector(self.lattice, ModelParams(h=h, J=self.J), self.cfg,
                               want_vector=want_vec, cap=self.cap, v0s=self._v0s)
        if want_vec:
            for p, r in res.items():
                if r.vector is not None:
                    self._v0s[p] = r.vector
        return res

    def __call__(self, h: complex) -> float:
        res = self._solve(h)
        return float(res[SECTOR_EVEN.parity].value.real - res[SECTOR_ODD.parity].value.real)

    def energies(self, h: complex):
        res = self._solve(h)
        return res[SECTOR_EVEN.parity].value, res[SECTOR_ODD.parity].value


def _bisect(f: Callable[[float], float], lo: float, hi: float, s_lo: float,
            tol: float) -> Tuple[float, float, bool]:
    """Refine a sign-change bracket; returns (midpoint, width, degenerate)."""
    degenerate = False
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        sm = f(mid)
        if sm == 0.0:
            lo = hi = mid
            degenerate = True
            break
        if (sm > 0) == (s_lo > 0):
            lo, s_lo = mid, sm
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo, degenerate


def find_zeros_on_line(evaluator: GapEvaluator, im_h: float, re_range: Sequence[float],
                       steps: int = 200, tol: float = 1e-10) -> List[ZeroPoint]:
    """All sign-change zeros of s along Im(h) = im_h, sorted by Re(h).

    Zeros closer than one grid cell can merge or be missed; rerun with more
    steps (or verify_line_resolution) when completeness matters.
    """
    if steps < 16:
        raise ValueError("need at least 16 grid steps")
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(re_range[0]), float(re_range[1])
    xs = np.linspace(a, b, steps + 1)
    svals = [evaluator(x + 1j * im_h) for x in xs]
    out = []
    for i in range(steps):
        s0, s1 = svals[i], svals[i + 1]
        if s0 == 0.0:
            out.append(ZeroPoint(xs[i] + 1j * im_h, 0.0, "line",
                                 (evaluator.sector_of(s1), evaluator.sector_of(s1)),
                                 degenerate=True))
            continue
        if s0 * s1 >= 0:
            continue
        root, width, dg = _bisect(lambda x: evaluator(x + 1j * im_h), xs[i], xs[i + 1], s0, tol)
        out.append(ZeroPoint(root + 1j * im_h, width, "line",
                             (evaluator.sector_of(s0), evaluator.sector_of(s1)),
                             degenerate=dg))
    return out


def verify_line_resolution(evaluator: GapEvaluator, im_h: float, re_range: Sequence[float],
                           steps: int, tol: float = 1e-10,
                           max_doublings: int = 4) -> List[ZeroPoint]:
    """Line scan that doubles the grid until the zero count stabilizes."""
    zs = find_zeros_on_line(evaluator, im_h, re_range, steps, tol)
    for _ in range(max_doublings):
        steps *= 2
        zs2 = find_zeros_on_line(evaluator, im_h, re_range, steps, tol)
        if len(zs2) == len(zs):
            return zs2
        zs = zs2
    return zs


def find_zeros_on_circle(evaluator: GapEvaluator, g: float, steps: Optional[int] = None,
                         tol: float = 1e-10) -> List[ZeroPoint]:
    """Zeros along h = g e^{i theta}, theta in (0, 2pi], refined in angle.

    The angular grid must resolve the expected 2L zeros: steps >= 8*L.
    """
    if not g > 0:
        raise ValueError("g must be positive")
    L = evaluator.lattice.L
    if steps is None:
        steps = 16 * L
    if steps < 8 * L:
        raise ValueError(f"steps={steps} under the resolution guard 8*L={8*L}")
    thetas = np.linspace(0.0, 2 * np.pi, steps + 1)[1:]
    f = lambda t: evaluator(g * cmath.exp(1j * t))
    svals = [f(t) for t in thetas]
    out = []
    for i in range(steps):
        j = (i + 1) % steps
        t0 = thetas[i]
        t1 = thetas[j] + (2 * np.pi if j == 0 else 0.0)
        s0, s1 = svals[i], svals[j]
        if s0 == 0.0:
            out.append(ZeroPoint(g * cmath.exp(1j * t0), 0.0, "circle",
                                 (evaluator.sector_of(s1), evaluator.sector_of(s1)),
                                 theta=t0, degenerate=True))
            continue
        if s0 * s1 >= 0:
            continue
        root, width, dg = _bisect(f, t0, t1, s0, tol)
        root %= 2 * np.pi
        if root == 0.0:
            root = 2 * np.pi
        out.append(ZeroPoint(g * cmath.exp(1j * root), width, "circle",
                             (evaluator.sector_of(s0), evaluator.sector_of(s1)),
                             theta=root, degenerate=dg))
    out.sort(key=lambda z: z.theta)
    return out


def fidelity_edge(evaluator: GapEvaluator, g: float, h_ref: float,
                  steps: Optional[int] = None, tol: float = 1e-10) -> EdgeReport:
    """Locate the smallest positive zero angle and compare to arccos(h_ref/g).

    The analytic edge is undefined for g < h_ref (uniform regime); the numeric
    part is still reported.  gap_present means no zero lies within half the
    analytic edge angle of theta = 0.
    """
    if not h_ref > 0:
        raise ValueError("h_ref must be positive")
    zeros = find_zeros_on_circle(evaluator, g, steps, tol)
    positive = sorted(z.theta for z in zeros if z.theta is not None)
    numeric = positive[0] if positive else None
    if g >= h_ref:
        analytic = float(np.arccos(h_ref / g))
        half = 0.5 * analytic
        near_zero = [t for t in positive if t < half or t > 2 * np.pi - half]
        gap_present = len(near_zero) == 0 and analytic > 0
    else:
        analytic = None
        gap_present = False
    return EdgeReport(g, numeric, analytic, gap_present)


def select_hL(zeros: Sequence[ZeroPoint]) -> ZeroPoint:
    """Finite-size critical point: maximal Re(h); ties (1e-9) take minimal Im(h).

    Only zeros in the upper half plane count; conjugate partners add nothing.
    """
    upper = [z for z in zeros if z.h.imag > 0]
    if not upper:
        raise EmptyZeroSetError("no zeros with Im(h) > 0; widen the scan box")
    best = upper[0]
    for z in upper[1:]:
        if z.h.real > best.h.real + HL_TIE_TOL:
            best = z
        elif abs(z.h.real - best.h.real) <= HL_TIE_TOL and z.h.imag < best.h.imag:
            best = z
    return best


def scan_box(evaluator: GapEvaluator, re_range: Sequence[float], im_values: Sequence[float],
             steps: int = 200, tol: float = 1e-10) -> List[ZeroPoint]:
    """Line scans over an Im(h) grid, concatenated and sorted deterministically."""
    out = []
    for im in im_values:
        out.extend(find_zeros_on_line(evaluator, im, re_range, steps, tol))
    out.sort(key=lambda z: (z.h.imag, z.h.real))
    return out


def refine_rightmost(evaluator: GapEvaluator, re_range: Sequence[float],
                     im_range: Sequence[float], steps: int = 200, tol: float = 1e-10,
                     im_grid: int = 24, golden_iters: int = 40) -> ZeroPoint:
    """Zero with the maximal Re(h) over the box, refined continuously in Im.

    Coarse Im grid to bracket the rightmost lobe, then golden-section on the
    rightmost-zero abscissa.  Output does not depend on the grid once the
    bracket captures the global lobe.
    """
    lo, hi = float(im_range[0]), float(im_range[1])

    def rightmost(im: float) -> Optional[ZeroPoint]:
        zs = find_zeros_on_line(evaluator, im, re_range, steps, tol)
        return zs[-1] if zs else None

    grid = np.linspace(lo, hi, im_grid)
    coarse = [(z.h.real if (z := rightmost(im)) else -np.inf, im) for im in grid]
    best_val, best_im = max(coarse)
    if best_val == -np.inf:
        raise EmptyZeroSetError("no zeros anywhere in the scan box")
    step = grid[1] - grid[0] if im_grid > 1 else (hi - lo)
    a, b = max(lo, best_im - step), min(hi, best_im + step)
    invphi = (np.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc = rightmost(c)
    fd = rightmost(d)
    vc = fc.h.real if fc else -np.inf
    vd = fd.h.real if fd else -np.inf
    for _ in range(golden_iters):
        if vc > vd:
            b, d, vd = d, c, vc
            c = b - invphi * (b - a)
            fc = rightmost(c)
            vc = fc.h.real if fc else -np.inf
        else:
            a, c, vc = c, d, vd
            d = a + invphi * (b - a)
            fd = rightmost(d)
            vd = fd.h.real if fd else -np.inf
    best = fc if vc >= vd else fd
    if best is None:
        raise EmptyZeroSetError("rightmost lobe vanished during refinement")
    return best
