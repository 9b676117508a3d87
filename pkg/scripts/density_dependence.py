"""Density of A = union of [2^n, 2^n + n] along two Følner sequences.

Along initial segments the ratio decays to 0; along the blocks themselves
it is identically 1.  Prints both profiles and optionally writes a CSV.
"""

import argparse

from timesp.folner import BlockUnion, InitialSegments, densities, remark_blocks
from timesp.specio import atomic_write, csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=20, help="number of stages")
    ap.add_argument("--out", help="CSV path")
    args = ap.parse_args()

    A = BlockUnion("2^n", "n", 1)
    runs = {
        "initial": densities(A, InitialSegments(1), args.n, schedule="dyadic"),
        "blocks": densities(A, remark_blocks(), args.n),
    }
    rows = []
    for name, rep in runs.items():
        print(f"# {name}: {rep.verdict()}")
        print(f"{'stage':>10} {'|F_n|':>10} {'|A∩F_n|':>10} {'ratio':>12}")
        for n, size, count, ratio in rep.rows():
            print(f"{n:>10} {size:>10} {count:>10} {float(ratio):>12.6g}")
            rows.append((name, n, size, count, ratio))
        print()
    if args.out:
        atomic_write(args.out, csv_text("density-dependence", ("sigma", "n", "size", "count", "ratio"), rows))


if __name__ == "__main__":
    main()
