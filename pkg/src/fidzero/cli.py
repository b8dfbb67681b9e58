"""Command-line orchestration: sector sweeps, zero scans, circle scans, fits.

Subcommands: scan1d, zeros1d, zeros2d, circle1d, circle2d, scaling, reproduce.
Every run writes its resolved configuration, timings, and a summary to
meta.json next to its data files.  Exit codes: 0 success, 2 config error,
3 solver failure.
"""

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, analytic1d
from .errors import EmptyZeroSetError, FidzeroError, SolverError
from .eigensolver import SolverConfig, dump_vector, fidelity_numeric, ground_by_sector
from .lattice import (SECTOR_EVEN, SECTOR_ODD, LatticeSpec, ModelParams,
                      build_hamiltonian)
from .output import (CIRCLE_COLUMNS, SCAN_COLUMNS, ZEROS_COLUMNS, RunWriter,
                     circle_rows, write_csv, zeros_rows)
from .scaling import ScalingSample, fit_power_law, fit_power_law_joint
from .zerofinder import (AnalyticGapEvaluator, EDGapEvaluator, GapEvaluator,
                         find_zeros_on_circle, find_zeros_on_line,
                         refine_rightmost, select_hL)


class ConfigError(Exception):
    pass


def _resolve_threads(value):
    if value is not None:
        return max(1, value)
    env = os.environ.get("FIDZERO_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"FIDZERO_THREADS={env!r} is not an integer")
    return os.cpu_count() or 1


def _map_tasks(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _solver_config(args) -> SolverConfig:
    return SolverConfig(dense_cutoff=args.dense_cutoff,
                        subspace_dim=args.subspace_dim,
                        max_restarts=args.max_restarts,
                        tol=args.solver_tol)


def _make_evaluator(args, lattice_dim: int) -> GapEvaluator:
    if lattice_dim == 1 and args.backend == "analytic":
        return AnalyticGapEvaluator(args.L, args.J)
    return EDGapEvaluator(LatticeSpec(lattice_dim, args.L), args.J, _solver_config(args))


def _config_dict(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ----------------------------------------------------------------- scan1d

def _scan1d_row(args, ev, L, x):
    h = complex(x, args.im_h)
    hp = h + args.delta
    try:
        if isinstance(ev, AnalyticGapEvaluator):
            Ee = analytic1d.sector_ground_energy(L, h, args.J, SECTOR_EVEN)
            Eo = analytic1d.sector_ground_energy(L, h, args.J, SECTOR_ODD)
            sector = SECTOR_ODD if Eo.real < Ee.real else SECTOR_EVEN
            F = analytic1d.fidelity_1d(L, h, hp, args.J)
        else:
            cfg = _solver_config(args)
            res = ground_by_sector(ev.lattice, ModelParams(h=h, J=args.J), cfg, want_vector=True)
            resp = ground_by_sector(ev.lattice, ModelParams(h=hp, J=args.J), cfg, want_vector=True)
            Ee, Eo = res[SECTOR_EVEN.parity].value, res[SECTOR_ODD.parity].value
            sector = SECTOR_ODD if Eo.real < Ee.real else SECTOR_EVEN
            secp = SECTOR_ODD if resp[SECTOR_ODD.parity].value.real < resp[SECTOR_EVEN.parity].value.real else SECTOR_EVEN
            if sector.parity != secp.parity:
                F = 0.0
            else:
                F = fidelity_numeric(res[sector.parity].vector, resp[sector.parity].vector)
        return [L, x, args.im_h, sector.parity, Ee.real, Ee.imag, Eo.real, Eo.imag, F, "ok"]
    except FidzeroError as e:
        nan = float("nan")
        return [L, x, args.im_h, 0, nan, nan, nan, nan, nan, f"failed:{type(e).__name__}"]


def cmd_scan1d(args):
    if args.re_max < args.re_min:
        raise ConfigError("re-max must be >= re-min")
    threads = _resolve_threads(args.threads)
    w = RunWriter(args.out, "scan1d", _config_dict(args), __version__)
    ev = _make_evaluator(args, 1)
    L = args.L
    xs = (np.linspace(args.re_min, args.re_max, args.steps + 1)
          if args.re_max > args.re_min else np.array([args.re_min]))
    t0 = time.perf_counter()
    if isinstance(ev, AnalyticGapEvaluator):
        rows = [_scan1d_row(args, ev, L, float(x)) for x in xs]
    else:
        rows = _map_tasks(lambda x: _scan1d_row(args, ev, L, float(x)), [float(x) for x in xs], threads)
    w.time("scan", t0)
    n = write_csv(w.path("scan.csv"), SCAN_COLUMNS, rows)
    w.summarize(rows=n, threads=threads)
    if args.dump_operator:
        op = build_hamiltonian(LatticeSpec(1, L), ModelParams(h=complex(xs[0], args.im_h), J=args.J))
        op.dump_triplets(w.path("operator.txt"))
    if args.dump_vectors:
        if args.backend != "ed":
            raise ConfigError("--dump-vectors needs --backend ed")
        res = ground_by_sector(LatticeSpec(1, L), ModelParams(h=complex(xs[0], args.im_h), J=args.J),
                               _solver_config(args), want_vector=True)
        for name, r in (("even", res[SECTOR_EVEN.parity]), ("odd", res[SECTOR_ODD.parity])):
            dump_vector(w.path(f"vector_{name}.bin"), r.vector)
    w.finish()
    return 0


# ------------------------------------------------------------- zeros scans

def _hl_payload(L, zero=None, error=None, box=None):
    if zero is not None:
        return {"L": L, "re_h": zero.h.real, "im_h": zero.h.imag,
                "bracket_width": zero.bracket_width, "source": zero.source,
                "degenerate": zero.degenerate}
    return {"L": L, "error": error, "scan_box": box}


def _run_zero_box(args, dim, writer) -> dict:
    """Box scan -> zeros.csv rows + hL selection (optionally Im-refined)."""
    threads = _resolve_threads(args.threads)
    ims = np.linspace(args.im_min, args.im_max, args.im_lines)
    re_range = (args.re_min, args.re_max)

    def scan_line(im):
        ev = _make_evaluator(args, dim)
        return find_zeros_on_line(ev, float(im), re_range, args.steps, args.tol)

    t0 = time.perf_counter()
    per_line = _map_tasks(scan_line, list(ims), threads)
    writer.time("box_scan", t0)
    zeros = [z for line in per_line for z in line]
    zeros.sort(key=lambda z: (z.h.imag, z.h.real))
    box = {"re_min": args.re_min, "re_max": args.re_max,
           "im_min": args.im_min, "im_max": args.im_max, "im_lines": args.im_lines}
    try:
        if args.refine_hl:
            t0 = time.perf_counter()
            best = refine_rightmost(_make_evaluator(args, dim), re_range,
                                    (args.im_min, args.im_max), args.steps, args.tol)
            writer.time("hl_refine", t0)
        else:
            best = select_hL(zeros)
        hl = _hl_payload(args.L, zero=best)
    except EmptyZeroSetError as e:
        hl = _hl_payload(args.L, error=str(e), box=box)
    n = write_csv(writer.path("zeros.csv"), ZEROS_COLUMNS, zeros_rows(args.L, zeros))
    writer.write_json("hL.json", hl)
    writer.summarize(zeros=n, threads=threads, box=box)
    return hl


def cmd_zeros1d(args):
    w = RunWriter(args.out, "zeros1d", _config_dict(args), __version__)
    _run_zero_box(args, 1, w)
    w.finish()
    return 0


def cmd_zeros2d(args):
    w = RunWriter(args.out, "zeros2d", _config_dict(args), __version__)
    if args.dump_operator:
        op = build_hamiltonian(LatticeSpec(2, args.L),
                               ModelParams(h=complex(args.re_min, args.im_min), J=args.J))
        op.dump_triplets(w.path("operator.txt"))
    _run_zero_box(args, 2, w)
    w.finish()
    return 0


# ------------------------------------------------------------ circle scans

def _run_circle(args, dim):
    w = RunWriter(args.out, f"circle{dim}d", _config_dict(args), __version__)
    ev = _make_evaluator(args, dim)
    t0 = time.perf_counter()
    zeros = find_zeros_on_circle(ev, args.g, args.steps, args.tol)
    w.time("circle_scan", t0)
    n = write_csv(w.path("circle.csv"), CIRCLE_COLUMNS, circle_rows(args.L, args.g, zeros))
    w.summarize(zeros=n, g=args.g)
    w.finish()
    return 0


def cmd_circle1d(args):
    return _run_circle(args, 1)


def cmd_circle2d(args):
    return _run_circle(args, 2)


# ---------------------------------------------------------------- scaling

def _fit_dict(fit):
    return {"component": fit.component, "h_c": fit.h_c, "a": fit.a,
            "nu": fit.nu, "rms_residual": fit.rms_residual}


def _load_hl_samples(paths):
    samples = []
    for p in paths:
        with open(p) as f:
            payload = json.load(f)
        entries = payload if isinstance(payload, list) else [payload]
        for e in entries:
            if "error" in e and e.get("error"):
                continue
            samples.append(ScalingSample(int(e["L"]), complex(e["re_h"], e["im_h"])))
    samples.sort(key=lambda s: s.L)
    return samples


def _scaling_payload(samples, joint=False, fixed_nu=None):
    fits = {"independent": {"Re": _fit_dict(fit_power_law(samples, "Re")),
                            "Im": _fit_dict(fit_power_law(samples, "Im"))}}
    if joint:
        fr, fi = fit_power_law_joint(samples)
        fits["joint"] = {"Re": _fit_dict(fr), "Im": _fit_dict(fi)}
    if fixed_nu is not None:
        fits["fixed_nu"] = {"Re": _fit_dict(fit_power_law(samples, "Re", fixed_nu=fixed_nu)),
                            "Im": _fit_dict(fit_power_law(samples, "Im", fixed_nu=fixed_nu))}
    return {"samples": [{"L": s.L, "re_h": s.hL.real, "im_h": s.hL.imag} for s in samples],
            "fits": fits}


def cmd_scaling(args):
    w = RunWriter(args.out, "scaling", _config_dict(args), __version__)
    samples = _load_hl_samples(args.input)
    if len(samples) < 3:
        raise ConfigError(f"need hL inputs for >= 3 sizes, got {len(samples)}")
    t0 = time.perf_counter()
    payload = _scaling_payload(samples, joint=args.joint, fixed_nu=args.fixed_nu)
    w.time("fit", t0)
    w.write_json("fit.json", payload)
    w.summarize(n_samples=len(samples))
    w.finish()
    return 0


# -------------------------------------------------------------- reproduce

def _ns(base, **over):
    d = dict(vars(base))
    d.update(over)
    return argparse.Namespace(**d)


def cmd_reproduce(args):
    out = args.out
    if args.figure == "fig2":
        return cmd_scan1d(_ns(args, L=10, im_h=0.5, re_min=0.0, re_max=1.5, steps=600,
                              delta=1e-3, backend="analytic", out=os.path.join(out, "fig2"),
                              dump_operator=False, dump_vectors=False))
    if args.figure == "fig3":
        hls = []
        for L in range(10, 33, 2):
            sub = _ns(args, L=L, re_min=0.0, re_max=1.5, im_min=0.01, im_max=0.6,
                      im_lines=24, steps=300, tol=1e-10, refine_hl=True,
                      backend="analytic", out=os.path.join(out, "fig3", f"L{L:02d}"))
            w = RunWriter(sub.out, "zeros1d", _config_dict(sub), __version__)
            hls.append(_run_zero_box(sub, 1, w))
            w.finish()
        w = RunWriter(os.path.join(out, "fig3"), "reproduce fig3", _config_dict(args), __version__)
        w.write_json("hL.json", hls)
        samples = [ScalingSample(e["L"], complex(e["re_h"], e["im_h"]))
                   for e in hls if "error" not in e]
        w.write_json("fit.json", _scaling_payload(samples, joint=True, fixed_nu=1.0))
        w.finish()
        return 0
    if args.figure == "fig4":
        for L in (10, 32):
            for g in (0.5, 1.5):
                _run_circle(_ns(args, L=L, g=g, steps=16 * L, tol=1e-10, backend="analytic",
                                out=os.path.join(out, "fig4", f"L{L:02d}_g{g}")), 1)
        return 0
    if args.figure == "fig5":
        hls = []
        for L in args.sizes:
            sub = _ns(args, L=L, re_min=0.0, re_max=3.5, im_min=0.05, im_max=1.0,
                      im_lines=4, steps=60, tol=args.tol_2d, refine_hl=False,
                      backend="ed", out=os.path.join(out, "fig5", f"L{L}"))
            w = RunWriter(sub.out, "zeros2d", _config_dict(sub), __version__)
            hls.append(_run_zero_box(sub, 2, w))
            w.finish()
        w = RunWriter(os.path.join(out, "fig5"), "reproduce fig5", _config_dict(args), __version__)
        w.write_json("hL.json", hls)
        samples = [ScalingSample(e["L"], complex(e["re_h"], e["im_h"]))
                   for e in hls if "error" not in e]
        if len(samples) >= 3:
            w.write_json("fit.json", _scaling_payload(samples, fixed_nu=0.63))
        else:
            w.write_json("fit.json", {"error": "need >= 3 sizes", "samples": len(samples)})
        cl = args.circle_size
        for g in (0.5, 3.5):
            _run_circle(_ns(args, L=cl, g=g, steps=max(8 * cl * cl, 64), tol=args.tol_2d,
                            backend="ed", out=os.path.join(out, "fig5", f"circle_L{cl}_g{g}")), 2)
        w.finish()
        return 0
    raise ConfigError(f"unknown figure {args.figure!r}")


# ------------------------------------------------------------------ parser

def _add_common(p, backend_default=None):
    p.add_argument("--J", type=float, default=1.0, help="coupling (energy units)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: FIDZERO_THREADS or CPU count)")
    p.add_argument("--seed", type=int, default=0, help="seed recorded for test-point generation")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dense-cutoff", type=int, default=4096)
    p.add_argument("--subspace-dim", type=int, default=60)
    p.add_argument("--max-restarts", type=int, default=300)
    p.add_argument("--solver-tol", type=float, default=1e-9)
    if backend_default:
        p.add_argument("--backend", choices=["analytic", "ed"], default=backend_default)


def build_parser():
    ap = argparse.ArgumentParser(prog="fidzero",
                                 description="Fidelity zeros and Lee-Yang scaling for "
                                             "quantum Ising models in a complex field")
    ap.add_argument("--version", action="version", version=f"fidzero {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("scan1d", help="sector energies + sliding fidelity along an Im(h) line")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--im-h", type=float, required=True)
    p.add_argument("--re-min", type=float, default=0.0)
    p.add_argument("--re-max", type=float, default=1.5)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--delta", type=float, default=1e-3, help="sliding fidelity offset h' = h + delta")
    p.add_argument("--dump-operator", action="store_true")
    p.add_argument("--dump-vectors", action="store_true")
    _add_common(p, backend_default="analytic")
    p.set_defaults(func=cmd_scan1d)

    for name, dim in (("zeros1d", 1), ("zeros2d", 2)):
        p = sub.add_parser(name, help=f"{dim}D box scan for fidelity zeros and h_L")
        p.add_argument("--L", type=int, required=True)
        p.add_argument("--re-min", type=float, default=0.0)
        p.add_argument("--re-max", type=float, default=1.5 if dim == 1 else 3.5)
        p.add_argument("--im-min", type=float, default=0.01 if dim == 1 else 0.05)
        p.add_argument("--im-max", type=float, default=0.6 if dim == 1 else 1.0)
        p.add_argument("--im-lines", type=int, default=24 if dim == 1 else 4)
        p.add_argument("--steps", type=int, default=300 if dim == 1 else 60)
        p.add_argument("--tol", type=float, default=1e-10 if dim == 1 else 1e-6)
        if dim == 1:
            p.add_argument("--refine-hl", action=argparse.BooleanOptionalAction, default=True,
                           help="golden-section Im refinement of the rightmost zero")
        else:
            p.add_argument("--refine-hl", action=argparse.BooleanOptionalAction, default=False)
            p.add_argument("--dump-operator", action="store_true")
        _add_common(p, backend_default="analytic" if dim == 1 else "ed")
        p.set_defaults(func=cmd_zeros1d if dim == 1 else cmd_zeros2d)

    for name, dim in (("circle1d", 1), ("circle2d", 2)):
        p = sub.add_parser(name, help=f"{dim}D fugacity-circle scan h = g e^(i theta)")
        p.add_argument("--L", type=int, required=True)
        p.add_argument("--g", type=float, required=True)
        p.add_argument("--steps", type=int, default=None, help="theta grid (default 16*L)")
        p.add_argument("--tol", type=float, default=1e-10 if dim == 1 else 1e-6)
        _add_common(p, backend_default="analytic" if dim == 1 else "ed")
        p.set_defaults(func=cmd_circle1d if dim == 1 else cmd_circle2d)

    p = sub.add_parser("scaling", help="power-law fit of h_L samples from hL.json files")
    p.add_argument("--input", action="append", required=True, help="hL.json (repeatable)")
    p.add_argument("--joint", action="store_true", help="also fit with a shared nu")
    p.add_argument("--fixed-nu", type=float, default=None, help="also fit with nu held fixed")
    _add_common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("reproduce", help="chain the runs behind one figure")
    p.add_argument("figure", choices=["fig2", "fig3", "fig4", "fig5"])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4],
                   help="fig5 lattice sizes for the scaling chain")
    p.add_argument("--circle-size", type=int, default=3, help="fig5 circle-scan lattice size")
    p.add_argument("--tol-2d", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except SolverError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return 3
    except EmptyZeroSetError as e:
        print(f"empty zero set: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
