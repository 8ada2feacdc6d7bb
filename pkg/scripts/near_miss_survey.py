"""List every place where |f| dips close to zero without crossing it.

A printed eigenvalue with no sign change nearby is usually one of these
points.  Scans EMES and EMOS cells for D = 3, 4, 5 and a in {1, 0, -1}.

    python3 scripts/near_miss_survey.py [--nmax 4]
"""
import argparse

from hulthen_kg.model import PotentialParams, QuantumNumbers
from hulthen_kg.solver import near_misses, solve_cell


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=4)
    ap.add_argument("--threshold", type=float, default=None)
    args = ap.parse_args()

    print("limit D  a   n l  roots                      near misses (E, f)")
    for limit in ("emes", "emos"):
        for dim in (3, 4, 5):
            for a in (1.0, 0.0, -1.0):
                p = PotentialParams.for_limit(limit, 2.0, a=a)
                for n in range(1, args.nmax + 1):
                    for l in range(n):
                        qn = QuantumNumbers(n, l, dim)
                        misses = near_misses(qn, p, threshold=args.threshold)
                        if not misses:
                            continue
                        roots = " ".join(f"{r:+.6f}" for r in solve_cell(qn, p).roots) or "none"
                        nm = " ".join(f"({m.energy:+.6f}, {m.residual:+.1e})" for m in misses)
                        print(f"{limit:5s} {dim} {a:+.0f} {n:2d} {l}  {roots:26s} {nm}")


if __name__ == "__main__":
    main()
