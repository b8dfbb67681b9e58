"""Power-law finite-size scaling fits  x_L = h_c + a * L^(-1/nu).

Default scheme per component: a coarse grid over nu in [0.3, 3.0] with linear
least squares for (h_c, a) at each nu, then a damped Gauss-Newton polish of
the full triple.  A shared-nu joint fit of both components is available as a
variant (both components are governed by one correlation length).
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import FitError

NU_GRID = np.arange(0.30, 3.0001, 0.01)
RANK_TOL = 1e-12


@dataclass(frozen=True)
class ScalingSample:
    L: int
    hL: complex


@dataclass(frozen=True)
class FitResult:
    h_c: float
    a: float
    nu: float
    rms_residual: float
    component: str  # "Re" | "Im"


def _component(samples: Sequence[ScalingSample], component: str) -> Tuple[np.ndarray, np.ndarray]:
    if len(samples) < 3:
        raise FitError("need at least 3 samples for a 3-parameter fit")
    Ls = np.array([s.L for s in samples], dtype=float)
    if np.any(np.diff(Ls) <= 0):
        raise FitError("sample sizes must be strictly increasing")
    if component == "Re":
        xs = np.array([s.hL.real for s in samples])
    elif component == "Im":
        xs = np.array([s.hL.imag for s in samples])
    else:
        raise FitError(f"unknown component {component!r}")
    if not (np.all(np.isfinite(Ls)) and np.all(np.isfinite(xs))):
        raise FitError("non-finite inputs")
    return Ls, xs


def _linear_at_nu(Ls: np.ndarray, xs: np.ndarray, nu: float) -> Tuple[float, float, float]:
    t = Ls ** (-1.0 / nu)
    if np.ptp(t) < RANK_TOL:
        raise FitError(f"design matrix is rank deficient at nu={nu}")
    A = np.column_stack([np.ones_like(t), t])
    coef, *_ = np.linalg.lstsq(A, xs, rcond=None)
    ssr = float(np.sum((xs - A @ coef) ** 2))
    return float(coef[0]), float(coef[1]), ssr


def _gauss_newton(Ls, xs, h_c, a, nu, max_iter=100):
    def ssr_of(p):
        t = Ls ** (-1.0 / max(p[2], 1e-6))
        r = xs - p[0] - p[1] * t
        return float(np.sum(r * r))

    p = np.array([h_c, a, nu], dtype=float)
    ssr = ssr_of(p)
    lam = 0.0
    for _ in range(max_iter):
        t = Ls ** (-1.0 / p[2])
        r = xs - p[0] - p[1] * t
        J = np.column_stack([
            -np.ones_like(t),
            -t,
            -p[1] * t * np.log(Ls) / p[2] ** 2,
        ])
        g = J.T @ r
        H = J.T @ J
        step_ok = False
        lam = max(lam, 0.0)
        for _ in range(25):
            try:
                step = np.linalg.solve(H + lam * np.diag(np.diag(H)) + 1e-300 * np.eye(3), -g)
            except np.linalg.LinAlgError:
                lam = max(2 * lam, 1e-8)
                continue
            cand = p + step
            cand[2] = min(max(cand[2], 0.05), 50.0)
            ssr_new = ssr_of(cand)
            if ssr_new <= ssr:
                p, ssr = cand, ssr_new
                lam = lam / 3 if lam > 1e-12 else 0.0
                step_ok = True
                break
            lam = max(2 * lam, 1e-8)
        if not step_ok or np.linalg.norm(step) < 1e-13 * (1 + np.linalg.norm(p)):
            break
    return p[0], p[1], p[2], ssr


def fit_power_law(samples: Sequence[ScalingSample], component: str = "Re",
                  fixed_nu: float = None) -> FitResult:
    """Fit one component of h_L; returns the polished (h_c, a, nu) triple.

    With fixed_nu the exponent is held and only (h_c, a) are solved linearly.
    """
    Ls, xs = _component(samples, component)
    if fixed_nu is not None:
        h_c, a, ssr = _linear_at_nu(Ls, xs, fixed_nu)
        return FitResult(h_c, a, float(fixed_nu), float(np.sqrt(ssr / Ls.size)), component)
    best = None
    for nu in NU_GRID:
        try:
            h_c, a, ssr = _linear_at_nu(Ls, xs, nu)
        except FitError:
            continue
        if best is None or ssr < best[3]:
            best = (h_c, a, nu, ssr)
    if best is None:
        raise FitError("all grid points were rank deficient")
    h_c, a, nu, ssr = _gauss_newton(Ls, xs, *best[:3])
    return FitResult(h_c, a, nu, float(np.sqrt(ssr / Ls.size)), component)


def fit_power_law_joint(samples: Sequence[ScalingSample]) -> Tuple[FitResult, FitResult]:
    """Shared-nu fit of Re and Im components; returns (Re fit, Im fit).

    nu minimizes the pooled sum of squares; (h_c, a) stay per-component.
    """
    Ls, xr = _component(samples, "Re")
    _, xi = _component(samples, "Im")

    def pooled(nu: float):
        hr, ar, sr = _linear_at_nu(Ls, xr, nu)
        hi, ai, si = _linear_at_nu(Ls, xi, nu)
        return sr + si, (hr, ar), (hi, ai)

    best = None
    for nu in NU_GRID:
        try:
            ssr, cr, ci = pooled(nu)
        except FitError:
            continue
        if best is None or ssr < best[0]:
            best = (ssr, cr, ci, nu)
    if best is None:
        raise FitError("all grid points were rank deficient")
    # golden-section polish of the 1D pooled objective around the grid optimum
    a, b = max(0.05, best[3] - 0.01), best[3] + 0.01
    invphi = (np.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = pooled(c)[0], pooled(d)[0]
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = pooled(c)[0]
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = pooled(d)[0]
    nu = 0.5 * (a + b)
    _, (hr, ar), (hi, ai) = pooled(nu)
    tr = Ls ** (-1.0 / nu)
    rms_r = float(np.sqrt(np.mean((xr - hr - ar * tr) ** 2)))
    rms_i = float(np.sqrt(np.mean((xi - hi - ai * tr) ** 2)))
    return (FitResult(hr, ar, nu, rms_r, "Re"), FitResult(hi, ai, nu, rms_i, "Im"))


def evaluate_model(fit: FitResult, L: float) -> float:
    """h_c + a * L^(-1/nu)."""
    if not L > 0:
        raise ValueError("L must be positive")
    return fit.h_c + fit.a * L ** (-1.0 / fit.nu)
