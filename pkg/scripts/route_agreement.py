"""Largest disagreement between the product, integral and oracle routes on a grid.

    python3 scripts/route_agreement.py
"""

from hyperterm import SeriesParams, eval_integral, eval_product, gamma_oracle, validate
from hyperterm.core import DivergentMarker, ParamError

AB = (0.5, 1.0, 2.0, 3.0)
NS = (-0.5, 1 / 3, 0.5, 4 / 3, 1.5, 7 / 3, 2.5)


def main():
    worst = {}
    for a in AB:
        for b in AB:
            for n in NS:
                problem = validate(SeriesParams(a, b), n)
                if isinstance(problem, DivergentMarker):
                    continue
                oracle = gamma_oracle(problem.params, n)
                diffs = {"product": abs(eval_product(problem).value / oracle - 1)}
                try:
                    diffs["integral"] = abs(eval_integral(problem).value / oracle - 1)
                except ParamError:
                    pass  # the ⅓ reduction needs a > b/3
                for route, d in diffs.items():
                    if d > worst.get(route, (0.0,))[0]:
                        worst[route] = (d, a, b, n)
    for route, (d, a, b, n) in worst.items():
        print(f"{route:>9}: max rel diff vs oracle {d:.2e} at a={a}, b={b}, n={n:.4g}")


if __name__ == "__main__":
    main()
