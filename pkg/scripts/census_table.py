"""Level sizes of the Kan replacement of small nerves, stage by stage.

    python scripts/census_table.py --depth 2 --frontier 1
"""

import argparse

from kanforge.groupoids import FiniteGroupoid, LocalGroupoid, local_nerve, nerve
from kanforge.kan import kan_replace, predicted_census


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--depth", type=int, default=1)
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--frontier", type=int, default=None)
    args = ap.parse_args()

    bases = {
        "N(Z/2)": nerve(FiniteGroupoid.cyclic(2), 3),
        "N(Z/3)": nerve(FiniteGroupoid.cyclic(3), 3),
        "N(pair{0,1})": nerve(FiniteGroupoid.pair([0, 1]), 3),
        "Nloc(Z[-1,1])": local_nerve(LocalGroupoid.integer_window(1), 3),
    }
    print(f"{'base':<16}{'stage':>6}  census (levels 0..3)       predicted next")
    for name, X in bases.items():
        F = kan_replace(X, args.depth, k_max=args.k_max, frontier=args.frontier)
        for s, Y in enumerate(F.stages):
            pred = predicted_census(Y, args.k_max) if s == 0 else ""
            print(f"{name:<16}{s:>6}  {str(Y.census()):<26} {pred}")
        if F.partial:
            print(f"{'':<16}  (stopped early: cell budget)")


if __name__ == "__main__":
    main()
