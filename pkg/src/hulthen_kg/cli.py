"""Command-line entry point: spectrum, thermo, reproduce and wavefunction subcommands.

Exit codes: 0 ok, 1 reproduction mismatch, 2 usage, 3 convergence / empty
spectrum, 4 numeric domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, parse_key_values
from .model import PoleError, QuantumNumbers
from .quantization import DomainError
from .reproduce import (FIGURE_IDS, FIGURE_QUANTITY, TABLE_IDS, figure_checks, figure_csv,
                        figure_series, gnuplot_script, reproduce_table)
from .solver import ConvergenceError, Spectrum, solve_cell, solve_spectrum
from .thermo import Convention, EmptySpectrumError, beta_grid, thermo_series
from .wavefunction import (IntegrationError, RadialWaveParams, normalization_constant,
                           normalization_weight, radial_wavefunction)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_DOMAIN = 0, 1, 2, 3, 4
CSV_HEADER = ["limit", "dim", "delta", "a", "n", "l", "E"]


class UsageError(Exception):
    pass


def _add_physics(p: argparse.ArgumentParser, multi: bool = False):
    nargs = "+" if multi else None
    p.add_argument("--limit", choices=["emes", "emos", "vector", "scalar", "general"])
    p.add_argument("--dim", type=int, nargs=nargs)
    p.add_argument("--a", type=float, nargs=nargs)
    p.add_argument("--v0", type=float)
    p.add_argument("--s0", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--tol", type=float, help="residual tolerance for accepted roots")
    p.add_argument("--scan-points", type=int)
    p.add_argument("--energy-sign", choices=["all", "neg", "pos"])
    p.add_argument("--config", type=Path, help="key = value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hulthen-kg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalues for an (n, l) range")
    _add_physics(sp)
    sp.add_argument("--nmax", type=int)
    sp.add_argument("--lmax", type=int)
    sp.add_argument("--l-values", type=str, help="comma-separated l list; drops the l < n rule")
    sp.add_argument("--all-l", action="store_true", help="solve l >= n cells as well")
    sp.add_argument("--format", choices=["table", "csv", "json"])
    sp.add_argument("--output", type=Path)
    sp.add_argument("--save-config", type=Path)

    th = sub.add_parser("thermo", help="Z, F, S, U, C_v on a beta grid")
    _add_physics(th, multi=True)
    th.add_argument("--input", type=Path, action="append",
                    help="spectrum CSV (an 'E' column); repeat for several series")
    th.add_argument("--nmax", type=int)
    th.add_argument("--lmax", type=int)
    th.add_argument("--beta-min", type=float, default=0.05)
    th.add_argument("--beta-max", type=float, default=50.0)
    th.add_argument("--beta-steps", type=int, default=200)
    th.add_argument("--grid", choices=["log", "lin"], default="log")
    th.add_argument("--convention", choices=["beta", "standard"], default="beta")
    th.add_argument("--kb", type=float, default=1.0)
    th.add_argument("--output", type=Path)
    th.add_argument("--gnuplot", type=Path, metavar="PREFIX",
                    help="also write PREFIX_<quantity>.csv/.gp in figure layout")

    rp = sub.add_parser("reproduce", help="compare against the embedded reference tables")
    rp.add_argument("ids", nargs="+", help=f"{' '.join(TABLE_IDS + FIGURE_IDS)} or 'all'")
    rp.add_argument("--emit-dir", type=Path, help="write figure data and gnuplot scripts here")
    rp.add_argument("--quiet", action="store_true", help="only print failing cells")

    wf = sub.add_parser("wavefunction", help="radial profile R(r) and weight w(r, E) as CSV")
    _add_physics(wf)
    wf.add_argument("--n", type=int, required=True)
    wf.add_argument("--l", type=int, default=0)
    wf.add_argument("--root-index", type=int, default=0, help="which root of the cell (ascending)")
    wf.add_argument("--r-min", type=float)
    wf.add_argument("--r-max", type=float)
    wf.add_argument("--r-steps", type=int, default=500)
    wf.add_argument("--normalize", action="store_true")
    wf.add_argument("--output", type=Path)
    return parser


RUN_KEYS = ("limit", "dim", "a", "v0", "s0", "delta", "q", "mass", "nmax", "lmax",
            "format", "output", "tol", "scan_points", "energy_sign")


def run_config(args, **override) -> RunConfig:
    """Defaults, then the --config file, then explicit flags."""
    data = {}
    if getattr(args, "config", None):
        data.update({k.replace("-", "_"): v
                     for k, v in parse_key_values(args.config.read_text()).items()})
    for key in RUN_KEYS:
        v = getattr(args, key, None)
        if v is not None and not isinstance(v, list):
            data[key] = v
    data.update(override)
    try:
        cfg = RunConfig.from_mapping({k: (str(v) if isinstance(v, Path) else v)
                                      for k, v in data.items()})
        cfg.potential()
        cfg.root_config()
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return cfg


def _emit(text: str, path):
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _filter(roots, sign):
    if sign == "neg":
        return [r for r in roots if r < 0]
    if sign == "pos":
        return [r for r in roots if r > 0]
    return list(roots)


def spectrum_csv(spec: Spectrum, sign: str = "all") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    p = spec.params
    for e in spec.entries:
        roots = _filter(e.roots, sign)
        for r in roots or ["none"]:
            w.writerow([p.limit.value, spec.dim, f"{p.delta:g}", f"{p.a:g}", e.n, e.l,
                        r if r == "none" else f"{r:.6f}"])
    return buf.getvalue()


def spectrum_table(spec: Spectrum, sign: str = "all") -> str:
    p = spec.params
    width = max([len(_filter(e.roots, sign)) for e in spec.entries] + [1])
    lines = [f"# {p.limit.value} D={spec.dim} a={p.a:g} v0={p.v0:g} s0={p.s0:g} "
             f"delta={p.delta:g} q={p.q:g} m={p.mass:g}",
             f"{'n':>3} {'l':>6}  " + "  ".join(f"{'E' + str(i + 1):>10}" for i in range(width))]
    for e in spec.entries:
        roots = _filter(e.roots, sign)
        cells = [f"{r:10.6f}" for r in roots] + [f"{'none':>10}"] * (width - len(roots))
        lines.append(f"{e.n:>3} {e.l:>6}  " + "  ".join(cells))
    return "\n".join(lines) + "\n"


def spectrum_json(spec: Spectrum, sign: str = "all") -> str:
    d = spec.to_dict()
    for entry in d["entries"]:
        entry["roots"] = _filter(entry["roots"], sign)
        entry["none"] = not entry["roots"]
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def _l_values(args, cfg):
    if getattr(args, "l_values", None):
        try:
            return [int(v) for v in args.l_values.split(",")], False
        except ValueError as exc:
            raise UsageError(f"bad --l-values {args.l_values!r}") from exc
    lmax = cfg.lmax if cfg.lmax is not None else cfg.nmax - 1
    if lmax < 0:
        raise UsageError("--lmax must be >= 0")
    return list(range(lmax + 1)), not getattr(args, "all_l", False)


def cmd_spectrum(args) -> int:
    cfg = run_config(args)
    if cfg.nmax < 1:
        raise UsageError("--nmax must be >= 1")
    if args.save_config:
        args.save_config.write_text(cfg.to_text())
    l_vals, below = _l_values(args, cfg)
    spec = solve_spectrum(cfg.potential(), cfg.dim, range(1, cfg.nmax + 1), l_vals,
                          cfg.root_config(), l_below_n=below)
    render = {"table": spectrum_table, "csv": spectrum_csv, "json": spectrum_json}[cfg.format]
    _emit(render(spec, cfg.energy_sign), cfg.output)
    return EXIT_OK


def read_energies(path: Path) -> list[float]:
    lines = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    if rows and "E" not in rows[0]:
        raise UsageError(f"{path}: no 'E' column")
    return [float(r["E"]) for r in rows if r["E"].strip() != "none"]


def _thermo_inputs(args) -> dict[str, list[float]]:
    sign = args.energy_sign or "all"
    series = {}
    if args.input:
        for path in args.input:
            series[path.stem] = _filter(read_energies(path), sign)
        return series
    dims = args.dim or [3]
    avals = args.a or [1.0]
    for d in dims:
        for a in avals:
            cfg = run_config(args, dim=d, a=a)
            if cfg.nmax < 1:
                raise UsageError("--nmax must be >= 1")
            l_vals, below = _l_values(args, cfg)
            spec = solve_spectrum(cfg.potential(), d, range(1, cfg.nmax + 1), l_vals,
                                  cfg.root_config(), l_below_n=below)
            series[f"D{d}_a{a:+g}"] = spec.energies(sign)
    return series


def cmd_thermo(args) -> int:
    series = _thermo_inputs(args)
    try:
        beta = beta_grid(args.beta_min, args.beta_max, args.beta_steps, args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    conv = Convention(args.convention)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "T", "Z", "F", "S", "U", "Cv", "convention", "series"])
    for name, energies in series.items():
        ts = thermo_series(energies, beta, conv, args.kb)
        for row in ts.rows():
            w.writerow([f"{v:.10g}" for v in row[:7]] + [row[7], name])
    _emit(buf.getvalue(), args.output)
    if args.gnuplot:
        _write_figures(args.gnuplot, series, beta, conv)
    return EXIT_OK


def _write_figures(prefix: Path, series, beta, conv, fids=FIGURE_IDS):
    prefix.parent.mkdir(parents=True, exist_ok=True)
    for fid in fids:
        qty = FIGURE_QUANTITY[fid][0]
        csv_path = prefix.parent / f"{prefix.name}_{qty}.csv"
        csv_path.write_text(figure_csv(fid, series, beta, conv), newline="\n")
        gp = gnuplot_script(fid, csv_path.name, series.keys())
        (prefix.parent / f"{prefix.name}_{qty}.gp").write_text(gp, newline="\n")


def cmd_reproduce(args) -> int:
    ids = list(TABLE_IDS + FIGURE_IDS) if "all" in args.ids else [i.upper() for i in args.ids]
    unknown = [i for i in ids if i not in TABLE_IDS + FIGURE_IDS]
    if unknown:
        raise UsageError(f"unknown ids: {', '.join(unknown)}")
    ok = True
    series = None
    for tid in ids:
        if tid in TABLE_IDS:
            report = reproduce_table(tid)
            ok &= report.passed
            text = report.format()
            if args.quiet:
                text = "\n".join(ln for ln in text.splitlines()
                                 if not ln.lstrip().startswith("ok"))
            print(text)
        else:
            series = series or figure_series()
            checks = figure_checks(tid, series)
            passed = all(c.passed for c in checks)
            ok &= passed
            print(f"figure {tid}: {'PASS' if passed else 'FAIL'}")
            for c in checks:
                if not (args.quiet and c.passed):
                    print(f"  {'ok  ' if c.passed else 'FAIL'} {c.name} {c.detail}".rstrip())
    if args.emit_dir:
        series = series or figure_series()
        beta = beta_grid(0.1, 10.0, 400, "log")
        args.emit_dir.mkdir(parents=True, exist_ok=True)
        _write_figures(args.emit_dir / "emes", series, beta, Convention.BETA)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_wavefunction(args) -> int:
    cfg = run_config(args)
    p = cfg.potential()
    qn = QuantumNumbers(args.n, args.l, cfg.dim)
    entry = solve_cell(qn, p, cfg.root_config())
    roots = _filter(entry.roots, cfg.energy_sign)
    if not roots or not 0 <= args.root_index < len(roots):
        print(f"no bound state for n={qn.n} l={qn.l} D={qn.dim} (root index {args.root_index})",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    energy = roots[args.root_index]
    wp = RadialWaveParams.from_state(energy, qn, p)
    r_min = args.r_min if args.r_min is not None else 0.01 / p.delta
    r_max = args.r_max if args.r_max is not None else 10.0 / p.delta
    if not 0 < r_min < r_max or args.r_steps < 2:
        raise UsageError("need 0 < r-min < r-max and r-steps >= 2")
    r = np.linspace(r_min, r_max, args.r_steps)
    scale = normalization_constant(wp) if args.normalize else 1.0
    R = scale * radial_wavefunction(r, wp)
    w = normalization_weight(r, energy, p)
    buf = io.StringIO()
    buf.write(f"# E={energy:.12g} n={qn.n} l={qn.l} D={qn.dim} mu={wp.mu:.10g} nu={wp.nu:.10g}"
              f" normalized={bool(args.normalize)}\n")
    buf.write("r,R,w\n")
    for ri, Ri, wi in zip(r, R, w):
        buf.write(f"{ri:.10g},{Ri:.10e},{wi:.10g}\n")
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "thermo": cmd_thermo,
            "reproduce": cmd_reproduce, "wavefunction": cmd_wavefunction}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except EmptySpectrumError as exc:
        print(f"empty spectrum: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (PoleError, DomainError, IntegrationError) as exc:
        print(f"numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
