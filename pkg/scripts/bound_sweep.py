"""Tabulate the general bound next to its closed forms over T.

    python3 scripts/bound_sweep.py --t-max 100000
"""

import argparse
import math

from binsample import analytics
from binsample.regularity import parse_condition


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=int, default=10**5)
    ap.add_argument("--conds", nargs="+", default=["abs:1", "square:1", "power:3:1", "power:1.5:1"])
    args = ap.parse_args()

    Ts = sorted({3, 4, 5} | {int(round(10 ** (k / 4))) for k in range(2, 4 * int(math.log10(args.t_max)) + 1)})
    Ts = [T for T in Ts if 3 <= T <= args.t_max]
    for text in args.conds:
        cond = parse_condition(text)
        name, closed = analytics.applicable_bound(cond)
        print(f"# {text} ({name})")
        print(f"{'T':>8} {'general':>12} {'closed':>12} {'ratio':>7}")
        for T in Ts:
            g, c = analytics.bound_general(cond, T), closed(T)
            print(f"{T:>8} {g:>12.6g} {c:>12.6g} {g / c:>7.4f}")
        print()


if __name__ == "__main__":
    main()
