"""Growth of the sparse semigroup against (log_p N)^tau(N) and against a
two-generator semigroup.

For tau = log log (n + 3) the first non-power generator is 2^1616 + 1, so
below that the semigroup is just the powers of 2 and ln|S ∩ [1, N]| / ln N
falls to 0.  The [2, 3] semigroup is printed alongside for comparison.
"""

import argparse

from timesp.corpus import SEMIGROUPS
from timesp.semigroup import (
    build_blocks,
    combinatorial_bound,
    generators_up_to,
    growth_exponent_series,
    verify_growth_bound,
)
from timesp.specio import atomic_write, csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spec", default="loglog", choices=sorted(SEMIGROUPS))
    ap.add_argument("--max-exp", type=int, default=7, help="largest N is 10^max_exp")
    ap.add_argument("--out", help="CSV path")
    args = ap.parse_args()

    spec = SEMIGROUPS[args.spec]
    if spec.tau is not None:
        spec = build_blocks(spec)
        for b in spec.blocks:
            print(f"block {b.m}: f = {b.f}, N* = {b.n_star if b.n_star < 10**12 else f'~2^{b.n_star.bit_length() - 1}'}")
        for a in spec.adjustments:
            print(f"block {a.m} raised from {a.found} for compatibility")
    Ns = [10**e for e in range(2, args.max_exp + 1)]
    series = growth_exponent_series(generators_up_to(spec, Ns[-1]), Ns)
    pair = growth_exponent_series([2, 3], Ns)

    header = ("N", "count", "exponent", "bound", "pass", "counting_bound", "count_2_3", "exponent_2_3")
    rows = []
    print(" ".join(f"{h:>14}" for h in header))
    for (N, c, e), (_, c23, e23) in zip(series, pair):
        if spec.tau is not None:
            r = verify_growth_bound(spec, N)
            bound, ok = r.bound_float, r.passed
        else:
            bound, ok = float("nan"), None
        row = (N, c, e, bound, ok, combinatorial_bound(spec, N), c23, e23)
        rows.append(row)
        print(" ".join(f"{v:>14.6g}" if isinstance(v, float) else f"{str(v):>14}" for v in row))
    if args.out:
        atomic_write(args.out, csv_text("semigroup-growth", header, rows, {"spec": args.spec}))


if __name__ == "__main__":
    main()
