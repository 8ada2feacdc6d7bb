"""Thermodynamic curves for the EMES spectra, as CSV plus gnuplot scripts.

Writes one CSV per quantity (Z, F, S, U, C_v) with a column per spectrum and
prints the property checks behind each figure.

    python3 scripts/thermo_figures.py [--out results/figures] [--convention beta]
"""
import argparse
from pathlib import Path

from hulthen_kg.reproduce import (FIGURE_IDS, FIGURE_QUANTITY, figure_checks, figure_csv,
                                  figure_series, gnuplot_script)
from hulthen_kg.thermo import Convention, beta_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/figures"))
    ap.add_argument("--convention", choices=[c.value for c in Convention], default="beta")
    ap.add_argument("--steps", type=int, default=400)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    series = figure_series()
    for key, e in series.items():
        print(f"{key}: {len(e)} levels, E in [{min(e):+.6f}, {max(e):+.6f}]")
    beta = beta_grid(0.1, 10.0, args.steps, "log")
    for fid in FIGURE_IDS:
        qty = FIGURE_QUANTITY[fid][0]
        csv_name = f"emes_{qty}.csv"
        (args.out / csv_name).write_text(figure_csv(fid, series, beta, Convention(args.convention)))
        (args.out / f"emes_{qty}.gp").write_text(gnuplot_script(fid, csv_name, series))
        for c in figure_checks(fid, series):
            print(f"{fid} {'ok  ' if c.passed else 'FAIL'} {c.name} {c.detail}".rstrip())


if __name__ == "__main__":
    main()
