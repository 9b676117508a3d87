"""Mixing-hierarchy verdicts for every bundled measure, with the worst
statistic behind each verdict.
"""

import argparse

from timesp.corpus import MEASURES
from timesp.mixing import ClassifyParams, classify, walters_set_average
from timesp.errors import NotApplicableError, UnsupportedVariantError
from timesp.specio import atomic_write, csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-p", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=8)
    ap.add_argument("--n-stages", type=int, default=256)
    ap.add_argument("--out", help="CSV path")
    args = ap.parse_args()

    params = ClassifyParams(k_max=args.k_max, l_max=args.k_max, n_stages=args.n_stages)
    header = ("measure", "invariant", "ergodic", "weak", "strong", "max_dev", "max_weak", "max_tail", "walters")
    rows = []
    print(" ".join(f"{h:>12}" for h in header))
    for name, mu in MEASURES.items():
        r = classify(mu, args.p, params)
        if r.pairs:
            dev = max(s.ergodic_deviation for s in r.pairs)
            weak = max(s.weak_mixing_average for s in r.pairs)
            tail = max(s.strong_mixing_tail for s in r.pairs)
        else:
            dev = weak = tail = float("nan")
        try:
            walters = float(walters_set_average(mu, args.p, 100))
        except (NotApplicableError, UnsupportedVariantError):
            walters = float("nan")
        row = (name, r.invariant, r.ergodic_consistent, r.weakly_mixing_consistent,
               r.strongly_mixing_consistent, dev, weak, tail, walters)
        rows.append(row)
        print(" ".join(f"{v:>12.4g}" if isinstance(v, float) else f"{str(v):>12}" for v in row))
    if args.out:
        atomic_write(args.out, csv_text("mixing-hierarchy", header, rows, {"p": args.p, "k_max": args.k_max}))


if __name__ == "__main__":
    main()
