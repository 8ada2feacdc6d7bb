"""Compare every reference table with the solver and write the reports.

    python3 scripts/reproduce_tables.py [--out results/tables]
"""
import argparse
import time
from pathlib import Path

from hulthen_kg.reproduce import TABLE_IDS, reproduce_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/tables"))
    ap.add_argument("ids", nargs="*", default=list(TABLE_IDS))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    summary = []
    for tid in args.ids:
        t0 = time.perf_counter()
        report = reproduce_table(tid)
        dt = time.perf_counter() - t0
        (args.out / f"{tid}.txt").write_text(report.format() + "\n")
        ok = len(report.cells) - len(report.failures())
        summary.append(f"{tid:3s} {'PASS' if report.passed else 'FAIL'} {ok:3d}/{len(report.cells):<3d} "
                       f"cells  {dt:6.2f}s")
    text = "\n".join(summary) + "\n"
    (args.out / "summary.txt").write_text(text)
    print(text, end="")


if __name__ == "__main__":
    main()
