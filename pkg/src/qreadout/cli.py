"""Command-line front end.

Subcommands: ``bounds``, ``scan``, ``bell``, ``threshold``, ``overhead``,
``oracle``.  Exit codes: 0 success, 2 usage error, 3 numeric failure.
CSV output is UTF-8, comma-separated, ``.`` decimal, with a mandatory
header row and values at 12 significant digits; identical flags (and seed)
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import fock, gaussian
from .bounds import (
    MemorySpec,
    bound_report,
    ecc_overhead,
    threshold_energy,
)
from .gaussian import NumericalError
from .receiver import (
    bell_error_prob,
    default_m_grid,
    default_phi_grid,
    mc_error_prob,
    optimize_bell_gain,
    variance_pair,
)

SCAN_AXES = ("r0", "r1", "N", "M", "nbar", "eps")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


@dataclass(frozen=True)
class ScanJob:
    """Rectangular scan over two parameters with everything else fixed."""

    x_name: str
    x_min: float
    x_max: float
    x_steps: int
    y_name: str
    y_min: float
    y_max: float
    y_steps: int
    fixed: dict
    minf: bool
    fmt: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        for name in (self.x_name, self.y_name):
            if name not in SCAN_AXES:
                raise ValueError(f"unknown scan axis {name!r}")
        if self.x_name == self.y_name:
            raise ValueError("scan axes must name distinct parameters")
        if self.x_steps < 2 or self.y_steps < 2:
            raise ValueError("each axis needs at least 2 steps")

    def axis_values(self, which: str) -> list[float]:
        lo, hi, steps = (
            (self.x_min, self.x_max, self.x_steps) if which == "x"
            else (self.y_min, self.y_max, self.y_steps)
        )
        return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _scan_point(task):
    """One grid point; module-level so process pools can pickle it."""
    params, minf = task
    memory = MemorySpec(
        r0=params["r0"], r1=params["r1"],
        nbar=params["nbar"], eps=params["eps"],
        m_star=params["m_star"],
    )
    m = None if minf else int(round(params["M"]))
    return bound_report(memory, params["N"], M=m, minf=minf)


def scan_rows(job: ScanJob) -> list[dict]:
    """All grid points in row-major (y outer, x inner) order."""
    tasks = []
    for y in job.axis_values("y"):
        for x in job.axis_values("x"):
            params = dict(job.fixed)
            params[job.x_name] = x
            params[job.y_name] = y
            tasks.append((params, job.minf))
    if job.jobs > 1:
        with ProcessPoolExecutor(max_workers=job.jobs) as pool:
            reports = list(pool.map(_scan_point, tasks, chunksize=64))
    else:
        reports = [_scan_point(t) for t in tasks]
    rows = []
    for (params, _), rep in zip(tasks, reports):
        rows.append({
            job.x_name: params[job.x_name],
            job.y_name: params[job.y_name],
            "C": rep.C, "Q": rep.Q, "G": rep.G,
            "conclusive": rep.conclusive,
        })
    return rows


def _write_rows(rows: list[dict], header: list[str], path: str, fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[h]) for h in header) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([{h: row[h] for h in header} for row in rows],
                          indent=None, separators=(",", ":")) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _memory_from_args(args) -> MemorySpec:
    return MemorySpec(r0=args.r0, r1=args.r1, nbar=args.nbar, eps=args.eps,
                      m_star=args.mstar)


def cmd_bounds(args) -> int:
    memory = _memory_from_args(args)
    if not args.minf and args.M is None:
        raise ValueError("either --M or --minf is required")
    rep = bound_report(memory, args.N, M=args.M, minf=args.minf)
    if args.json:
        print(json.dumps(rep.as_dict(), sort_keys=True))
    else:
        for key, val in rep.as_dict().items():
            print(f"{key} = {_fmt(val)}")
    return EXIT_OK


def cmd_scan(args) -> int:
    fixed = {
        "r0": args.r0, "r1": args.r1, "N": args.N,
        "M": args.M if args.M is not None else 1,
        "nbar": args.nbar, "eps": args.eps, "m_star": args.mstar,
    }
    job = ScanJob(
        x_name=args.x, x_min=args.x_min, x_max=args.x_max, x_steps=args.x_steps,
        y_name=args.y, y_min=args.y_min, y_max=args.y_max, y_steps=args.y_steps,
        fixed=fixed, minf=args.minf, fmt=args.format, jobs=args.jobs,
    )
    rows = scan_rows(job)
    header = [job.x_name, job.y_name, "C", "Q", "G", "conclusive"]
    _write_rows(rows, header, args.out, args.format)
    if args.plot:
        from .figures import render_heatmap
        render_heatmap(rows, job.x_name, job.y_name, "G", args.plot,
                       title="information gain")
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _parse_grid(text: str, cast):
    values = [cast(tok) for tok in text.split(",") if tok]
    if not values:
        raise ValueError("empty grid")
    return values


def cmd_bell(args) -> int:
    memory = _memory_from_args(args)
    m_grid = _parse_grid(args.m_list, int) if args.m_list else default_m_grid(args.N)
    phi_grid = _parse_grid(args.phi_list, float) if args.phi_list \
        else default_phi_grid()
    opt = optimize_bell_gain(memory, args.N, m_grid, phi_grid)
    header = ["M", "phi", "P_err", "G"]
    rows = [{"M": p.M, "phi": p.phi, "P_err": p.p_err, "G": p.G}
            for p in opt.surface]
    if args.mc_check:
        header += ["P_err_mc", "mc_std_err", "mc_3sigma_ok"]
        flagged = 0
        for row in rows:
            pair = variance_pair(memory, args.N / row["M"])
            mc = mc_error_prob(row["M"], row["phi"], pair.v0, pair.v1,
                               args.trials, args.seed)
            ok = abs(mc.p_err - row["P_err"]) <= 3.0 * mc.std_err + 1e-12
            flagged += 0 if ok else 1
            row.update(P_err_mc=mc.p_err, mc_std_err=mc.std_err,
                       mc_3sigma_ok=ok)
        if flagged:
            print(f"warning: {flagged} grid points disagree with Monte Carlo "
                  "beyond 3 standard errors", file=sys.stderr)
    _write_rows(rows, header, args.out, "csv")
    if args.plot:
        from .figures import render_bell_surface
        render_bell_surface(rows, args.plot, title="receiver gain surface")
    summary = {
        "G_best": opt.G_best, "M_best": opt.M_best, "phi_best": opt.phi_best,
        "P_err_best": opt.p_err_best, "C": opt.C,
    }
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        for key, val in summary.items():
            print(f"{key} = {_fmt(val)}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    value = threshold_energy(args.r0, args.r1)
    print(_fmt(value))
    return EXIT_OK


def cmd_overhead(args) -> int:
    value = ecc_overhead(args.perr)
    print(_fmt(value))
    return EXIT_OK


def cmd_oracle(args) -> int:
    """Spot check: Gaussian closed forms against the Fock brute force."""
    n_s, r0, r1 = args.ns, args.r0, args.r1
    theta = lambda r: gaussian.apply_channel(
        gaussian.tmsv_state(n_s), 0, gaussian.pure_loss(r))
    rho = lambda r: fock.apply_pure_loss_fock(fock.tmsv_fock(n_s), 0, r)
    g0, g1 = theta(r0), theta(r1)
    f0, f1 = rho(r0), rho(r1)
    devs = {}
    import numpy as np
    devs["overlap"] = abs(gaussian.gaussian_overlap(g0, g1)
                          - float(np.sum(f0.matrix * f1.matrix.T)))
    q_g, _ = gaussian.qcb(g0, g1)
    q_f, _ = fock.qcb_fock(f0, f1)
    devs["qcb"] = abs(q_g - q_f)
    pair = fock.ChernoffPairFock(f0, f1)
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        devs[f"overlap_t_{t}"] = abs(
            gaussian.qcb_overlap_t(g0, g1, t) - pair.q_t(t))
    alpha0, alpha1 = math.sqrt(r0 * n_s), math.sqrt(r1 * n_s)
    fid_g = gaussian.gaussian_fidelity_1mode(
        gaussian.coherent_state(alpha0), gaussian.coherent_state(alpha1))
    fid_f = fock.fidelity_fock(fock.coherent_fock(alpha0, 40),
                               fock.coherent_fock(alpha1, 40))
    devs["fidelity"] = abs(fid_g - fid_f)
    for name, dev in devs.items():
        print(f"{name}: {dev:.3e}")
    print(f"max_abs_deviation: {max(devs.values()):.3e}")
    return EXIT_OK


def _add_memory_flags(parser, require_r=True, r_defaults=(None, None)):
    parser.add_argument("--r0", type=float, required=require_r,
                        default=r_defaults[0], help="reflectivity encoding bit 0")
    parser.add_argument("--r1", type=float, required=require_r,
                        default=r_defaults[1], help="reflectivity encoding bit 1")
    parser.add_argument("--nbar", type=float, default=0.0,
                        help="background thermal photons per mode")
    parser.add_argument("--eps", type=float, default=0.0,
                        help="internal added-noise variance (vacuum units)")
    parser.add_argument("--mstar", type=int, default=None,
                        help="classical bandwidth cap (default: unbounded)")


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreadout",
        description="Classical vs entangled-light bounds for optical memory readout",
    )
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="single-point bound report")
    _add_memory_flags(p)
    p.add_argument("--N", type=float, required=True, help="signal energy (photons)")
    p.add_argument("--M", type=int, default=None, help="signal bandwidth (modes)")
    p.add_argument("--minf", action="store_true",
                   help="infinite-bandwidth limit instead of fixed M")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scan", help="two-parameter grid scan to CSV/JSON")
    _add_memory_flags(p, require_r=False, r_defaults=(0.0, 1.0))
    p.add_argument("--N", type=float, default=30.0)
    p.add_argument("--M", type=int, default=30)
    p.add_argument("--minf", action="store_true")
    p.add_argument("--x", required=True, choices=SCAN_AXES)
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--x-steps", type=int, required=True)
    p.add_argument("--y", required=True, choices=SCAN_AXES)
    p.add_argument("--y-min", type=float, required=True)
    p.add_argument("--y-max", type=float, required=True)
    p.add_argument("--y-steps", type=int, required=True)
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", default=None, help="also render a PNG heatmap here")
    p.add_argument("--jobs", type=int,
                   default=int(os.environ.get("QREADOUT_JOBS", "1")),
                   help="parallel workers (env QREADOUT_JOBS)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bell", help="chi-square receiver optimization surface")
    _add_memory_flags(p)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--m-list", default=None,
                   help="comma-separated copy counts (default: auto grid)")
    p.add_argument("--phi-list", default=None,
                   help="comma-separated significance levels (default: auto grid)")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", default=None, help="also render the gain surface PNG")
    p.add_argument("--mc-check", action="store_true",
                   help="add Monte Carlo columns and flag 3-sigma disagreement")
    p.add_argument("--trials", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("threshold", help="threshold energy for a memory")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("overhead", help="Shannon cells-per-bit overhead")
    p.add_argument("--perr", type=float, required=True)
    p.set_defaults(func=cmd_overhead)

    p = sub.add_parser("oracle", help="Gaussian-vs-Fock spot check")
    p.add_argument("--ns", type=float, required=True,
                   help="mean photons per signal mode")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--r1", type=float, default=1.0)
    p.set_defaults(func=cmd_oracle)

    if config:
        for subparser in sub.choices.values():
            for action in subparser._actions:
                if action.dest in config:
                    action.default = config[action.dest]
                    action.required = False
    return parser


def _load_config(argv) -> dict:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            with open(argv[i + 1], encoding="utf-8") as fh:
                return json.load(fh)
        if tok.startswith("--config="):
            with open(tok.split("=", 1)[1], encoding="utf-8") as fh:
                return json.load(fh)
    return {}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = _load_config(argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser(config)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
