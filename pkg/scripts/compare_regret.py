"""Binary sampling vs Piyavskii-Shubert on Lipschitz corpus functions.

Prints cumulative and simple regret at a few budgets for both algorithms.

    python3 scripts/compare_regret.py --budgets 10 100 1000 --fns V1 S1 W1
"""

import argparse

from binsample import analytics, cli, corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fns", nargs="+", default=["V1", "Q1", "S1", "W1"])
    ap.add_argument("--budgets", nargs="+", type=int, default=[10, 100, 1000])
    args = ap.parse_args()

    print(f"{'fn':<4} {'T':>6} {'R_T binary':>12} {'R_T ps':>12} {'simple binary':>14} {'simple ps':>12} {'L log2(3T)':>11}")
    for fid in args.fns:
        fn = corpus.get(fid)
        cond = fn.condition("abs")
        oracle = cli.make_oracle(fn, cond, analytics.DEFAULT_GRID)
        for T in args.budgets:
            reps = {alg: analytics.regret(cli.run_algorithm(fn, cond, alg, T), oracle, cond) for alg in ("binary", "ps")}
            b, p = reps["binary"], reps["ps"]
            print(
                f"{fid:<4} {T:>6} {b.R_T:>12.5g} {p.R_T:>12.5g} {b.simple[-1]:>14.3g} {p.simple[-1]:>12.3g} "
                f"{b.bound[-1]:>11.4g}"
            )


if __name__ == "__main__":
    main()
