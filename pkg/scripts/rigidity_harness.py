"""Run invariance scans and rigidity verdicts over the bundled corpus.

Every (measure, l, Følner sequence) combination is reported; the script
exits with status 1 if any verdict is a CONTRADICTION.
"""

import argparse
import sys

from timesp.corpus import FOLNER, MEASURES
from timesp.mixing import classify
from timesp.rigidity import CONTRADICTION, invariance_scan, rigidity_verdict
from timesp.specio import atomic_write, csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-p", type=int, default=2)
    ap.add_argument("--ls", default="1,-1,2,3", help="comma separated shifts l")
    ap.add_argument("--j-max", type=int, default=32)
    ap.add_argument("--out", help="CSV path")
    args = ap.parse_args()

    ls = [int(x) for x in args.ls.split(",")]
    sigmas = {k: FOLNER[k] for k in ("initial", "tail", "blocks")}
    rows = []
    bad = 0
    for name, mu in MEASURES.items():
        report = classify(mu, args.p)
        for l in ls:
            scan = invariance_scan(mu, args.p, l, args.j_max)
            for sname, sigma in sigmas.items():
                v = rigidity_verdict(mu, scan, sigma, report)
                A = ",".join(f"{a}-{b}" if a != b else str(a) for a, b in scan.A.intervals) or "-"
                met = ",".join(map(str, v.hypotheses_met)) or "-"
                rows.append((name, l, sname, A, v.density_value, met, v.dichotomy, v.conclusion))
                bad += v.conclusion == CONTRADICTION
                print(f"{name:>12} l={l:>3} {sname:>8}  met={met:<6} {v.dichotomy:<14} {v.conclusion:<26} A={A[:40]}")
    print(f"\n{len(rows)} verdicts, {bad} contradictions")
    if args.out:
        header = ("measure", "l", "sigma", "A", "density", "met", "dichotomy", "conclusion")
        atomic_write(args.out, csv_text("rigidity-harness", header, rows, {"p": args.p, "j_max": args.j_max}))
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
