"""Reference tables shipped as CSV fixtures, and the table/figure comparison harness.

Table ids: T1-T3 EMES (D = 3, 4, 5), T4-T6 EMOS, H3-H5 EMOS with a = -1 at
large l, T7 pure vector, T8 pure scalar.  Figure ids F1-F5 cover Z, F, S, U
and C_v built from the EMES spectra.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .model import PotentialParams, QuantumNumbers
from .solver import RootFindConfig, near_misses, solve_cell, solve_spectrum
from .thermo import Convention, beta_grid, partition_function, thermo_series

TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "H3", "H4", "H5", "T7", "T8")
FIGURE_IDS = ("F1", "F2", "F3", "F4", "F5")
DEFAULT_TOL = 1e-5
WIDE_TOL = 1e-4
DEPTH = 2.0


@dataclass(frozen=True)
class FixtureCell:
    limit: str
    dim: int
    delta: float
    a: float
    n: int
    l: int
    printed: tuple[str, ...]

    @property
    def expected(self) -> tuple[float, ...]:
        return tuple(sorted(float(v) for v in self.printed if v != "none"))

    @property
    def tol(self) -> float:
        # values printed with more than six decimals are suspected typos
        long = any(v != "none" and len(v.split(".")[1]) > 6 for v in self.printed)
        return WIDE_TOL if long else DEFAULT_TOL

    def params(self) -> PotentialParams:
        return PotentialParams.for_limit(self.limit, DEPTH, a=self.a, delta=self.delta)

    def quantum_numbers(self) -> QuantumNumbers:
        return QuantumNumbers(self.n, self.l, self.dim)


def table_text(tid: str) -> str:
    if tid not in TABLE_IDS:
        raise KeyError(f"unknown table id {tid!r}")
    return resources.files("hulthen_kg").joinpath("data", f"{tid}.csv").read_text("utf-8")


def load_table(tid: str) -> list[FixtureCell]:
    """Fixture rows grouped into cells, keeping the printed row order."""
    lines = [ln for ln in table_text(tid).splitlines() if not ln.startswith("#")]
    groups: dict[tuple, list[str]] = {}
    for row in csv.DictReader(io.StringIO("\n".join(lines))):
        key = (row["limit"], int(row["dim"]), float(row["delta"]), float(row["a"]),
               int(row["n"]), int(row["l"]))
        groups.setdefault(key, []).append(row["E"].strip())
    return [FixtureCell(*k, tuple(v)) for k, v in groups.items()]


@dataclass
class CellDiff:
    cell: FixtureCell
    computed: tuple[float, ...]
    matched: list[tuple[float, float]] = field(default_factory=list)
    missing: list[float] = field(default_factory=list)
    extra: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra

    @property
    def max_abs_diff(self) -> float:
        return max((abs(e - c) for e, c in self.matched), default=0.0)


def match_sets(expected, computed, tol):
    """Greedy nearest matching of two root sets; returns (pairs, missing, extra)."""
    left = list(computed)
    pairs, missing = [], []
    for e in expected:
        if left:
            j = int(np.argmin([abs(e - c) for c in left]))
            if abs(e - left[j]) <= tol:
                pairs.append((e, left.pop(j)))
                continue
        missing.append(e)
    return pairs, missing, left


def compare_cell(cell: FixtureCell, config: RootFindConfig = RootFindConfig()) -> CellDiff:
    p, qn = cell.params(), cell.quantum_numbers()
    computed = solve_cell(qn, p, config).roots
    pairs, missing, extra = match_sets(cell.expected, computed, cell.tol)
    diff = CellDiff(cell, computed, pairs, missing, extra)
    if missing:
        misses = near_misses(qn, p, config)
        for e in missing:
            hit = [m for m in misses if abs(m.energy - e) <= cell.tol]
            if hit:
                diff.notes.append(f"{e:+.6f} is a near miss: |f| has a local minimum "
                                  f"{hit[0].residual:+.2e} at E={hit[0].energy:+.7f}, no zero")
            else:
                diff.notes.append(f"{e:+.6f} has neither a root nor a near miss within {cell.tol:g}")
    for c in extra:
        diff.notes.append(f"computed root {c:+.6f} is not printed")
    return diff


@dataclass
class TableReport:
    tid: str
    cells: list[CellDiff]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    def failures(self) -> list[CellDiff]:
        return [c for c in self.cells if not c.passed]

    def format(self) -> str:
        out = [f"table {self.tid}: {'PASS' if self.passed else 'FAIL'} "
               f"({len(self.cells) - len(self.failures())}/{len(self.cells)} cells)"]
        for d in self.cells:
            c = d.cell
            exp = " ".join(f"{v:+.6f}" for v in c.expected) or "none"
            got = " ".join(f"{v:+.6f}" for v in d.computed) or "none"
            status = "ok  " if d.passed else "FAIL"
            out.append(f"  {status} D={c.dim} delta={c.delta:g} a={c.a:+g} n={c.n} l={c.l:<5d} "
                       f"expected [{exp}] computed [{got}] max|dE|={d.max_abs_diff:.1e}")
            out.extend(f"       {note}" for note in d.notes)
        return "\n".join(out)


def reproduce_table(tid: str, config: RootFindConfig = RootFindConfig()) -> TableReport:
    return TableReport(tid, [compare_cell(c, config) for c in load_table(tid)])


# figures -------------------------------------------------------------------

def emes_energies(dim: int, a: float, config: RootFindConfig = RootFindConfig()) -> list[float]:
    p = PotentialParams.for_limit("emes", DEPTH, a=a, delta=0.01)
    return solve_spectrum(p, dim, range(1, 5), range(4), config, l_below_n=True).energies()


def figure_series(config: RootFindConfig = RootFindConfig()) -> dict[str, list[float]]:
    """The two panels of every figure: a in {1, 0, -1} at D = 3, and D in {3, 4, 5} at a = 1."""
    series = {f"D3_a{a:+d}": emes_energies(3, a, config) for a in (1, 0, -1)}
    for d in (4, 5):
        series[f"D{d}_a+1"] = emes_energies(d, 1, config)
    return series


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


OVERLAP_TOL = 0.05
FD_REL_TOL = 1e-4  # ~20 h^2 for the 2001-point log grid


def _rel_gap(fd, exact) -> float:
    """Largest finite-difference error relative to the series' peak magnitude."""
    return float(np.max(np.abs(fd - exact)) / np.max(np.abs(exact)))


def z_overlap(e3, e4, beta) -> float:
    z3 = partition_function(e3, beta)[1]
    z4 = partition_function(e4, beta)[1]
    return float(np.max(np.abs(z3 - z4) / z3))


def _monotone_z(energies, beta) -> bool:
    z = partition_function(energies, beta)[1]
    dz = np.diff(z)
    e = np.asarray(energies)
    if np.all(e < 0):
        return bool(np.all(dz > 0))
    if np.all(e > 0):
        return bool(np.all(dz < 0))
    return True


def figure_checks(fid: str, series=None, config: RootFindConfig = RootFindConfig()) -> list[Check]:
    if fid not in FIGURE_IDS:
        raise KeyError(f"unknown figure id {fid!r}")
    series = series or figure_series(config)
    beta = beta_grid(0.1, 10.0, 2001, "log")
    checks = []
    if fid == "F1":
        dev = z_overlap(series["D3_a+1"], series["D4_a+1"], beta)
        checks.append(Check("Z overlap D=3 vs D=4 (a=1)", dev <= OVERLAP_TOL,
                            f"max |Z3-Z4|/Z3 = {dev:.4f} on beta in [0.1, 10], tol {OVERLAP_TOL}"))
        mono = all(_monotone_z(e, beta) for e in series.values())
        checks.append(Check("Z monotone in beta with the spectrum's sign", mono, ""))
    for key, e in series.items():
        dbeta = thermo_series(e, beta, Convention.BETA)
        std = thermo_series(e, beta, Convention.STANDARD)
        emin, emax = min(e), max(e)
        if fid == "F2":
            ident = np.max(np.abs(std.f - (std.u - std.s / beta)))
            checks.append(Check(f"{key}: F = U - T S", ident <= 1e-12, f"max residual {ident:.1e}"))
        elif fid == "F3":
            ok = np.all(std.s >= -1e-12) and np.all(std.s <= np.log(len(e)) + 1e-12)
            rel = _rel_gap(-beta**2 * dbeta.s, std.s)
            checks.append(Check(f"{key}: 0 <= S <= ln N", bool(ok), ""))
            checks.append(Check(f"{key}: S_std = -beta^2 S_beta", rel <= FD_REL_TOL,
                                f"max relative gap {rel:.1e}"))
        elif fid == "F4":
            ok = np.all((std.u >= emin - 1e-12) & (std.u <= emax + 1e-12))
            checks.append(Check(f"{key}: U within [Emin, Emax]", bool(ok), ""))
        elif fid == "F5":
            ok = np.all(std.cv >= 0) and np.all(dbeta.cv <= 1e-9)
            rel = _rel_gap(-beta**2 * dbeta.cv, std.cv)
            checks.append(Check(f"{key}: C_v signs", bool(ok), ""))
            checks.append(Check(f"{key}: C_v,std = -beta^2 C_v,beta", rel <= FD_REL_TOL,
                                f"max relative gap {rel:.1e}"))
    return checks


FIGURE_QUANTITY = {"F1": ("z", "Z"), "F2": ("f", "F"), "F3": ("s", "S"),
                   "F4": ("u", "U"), "F5": ("cv", "C_v")}


def figure_csv(fid: str, series, beta, convention=Convention.BETA) -> str:
    attr, _ = FIGURE_QUANTITY[fid]
    keys = list(series)
    cols = {k: getattr(thermo_series(series[k], beta, convention), attr) for k in keys}
    buf = io.StringIO()
    buf.write("beta,T," + ",".join(keys) + "\n")
    for i, b in enumerate(beta):
        buf.write(f"{b:.10g},{1 / b:.10g}," + ",".join(f"{cols[k][i]:.10e}" for k in keys) + "\n")
    return buf.getvalue()


def gnuplot_script(fid: str, csv_name: str, series_keys) -> str:
    """Two-panel layout: varying a at D = 3 (left), varying D at a = 1 (right)."""
    _, label = FIGURE_QUANTITY[fid]
    keys = list(series_keys)
    col = {k: i + 3 for i, k in enumerate(keys)}
    left = [k for k in keys if k.startswith("D3_")]
    right = [k for k in keys if k.endswith("a+1")]

    def plot(ks):
        return "plot " + ", \\\n     ".join(
            f"'{csv_name}' using 2:{col[k]} with lines title '{k}'" for k in ks)

    return "\n".join([
        "set datafile separator ','",
        "set terminal pngcairo size 1200,500",
        f"set output '{fid}.png'",
        "set multiplot layout 1,2",
        "set xlabel 'T'", f"set ylabel '{label}'", "set logscale x",
        plot(left), plot(right), "unset multiplot", ""])
