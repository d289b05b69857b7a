"""Terms needed by the adaptive product for each alpha strategy and tolerance.

Prints one row per (strategy, tol) with the term count and the relative
error against the Gamma oracle.

    python3 scripts/convergence_study.py --a 1 --b 1 --n 0.5
"""

import argparse

from hyperterm import (
    Accelerated,
    Adaptive,
    Custom,
    DefaultA,
    SeriesParams,
    eval_product,
    gamma_oracle,
    resolve_alpha,
    validate,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--n", type=float, default=0.5)
    args = ap.parse_args()

    params = SeriesParams(args.a, args.b)
    problem = validate(params, args.n)
    exact = gamma_oracle(params, args.n)
    strategies = [
        ("a", DefaultA()),
        ("accel", Accelerated()),
        ("a/4", Custom(args.a / 4)),
        ("4a", Custom(4 * args.a)),
    ]
    print(f"{'strategy':>8} {'alpha':>10} {'tol':>8} {'terms':>9} {'rel err':>10}")
    for label, strategy in strategies:
        alpha = resolve_alpha(strategy, params, args.n)
        for tol in (1e-4, 1e-6, 1e-8, 1e-10):
            r = eval_product(problem, strategy, Adaptive(tol))
            print(f"{label:>8} {alpha:>10.4g} {tol:>8.0e} {r.effort:>9} {abs(r.value / exact - 1):>10.2e}")


if __name__ == "__main__":
    main()
