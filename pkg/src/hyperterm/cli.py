"""``hyperterm`` command line: eval, table, converge, compare.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 evaluation error (or route disagreement for ``compare``), 2 divergent
index, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import evaluate
from .core import (
    Accelerated,
    AlphaStrategy,
    Custom,
    DefaultA,
    DivergentMarker,
    DomainError,
    NoConvergence,
    ParamError,
    SeriesParams,
    shift,
    validate,
)
from .integral import eval_integral, integral_supported
from .product import Adaptive, eval_product, resolve_alpha
from .reference import eval_oracle

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGENT = 2
EXIT_USAGE = 64

COMPARE_TOL = 1e-7
TABLE_TOL = 1e-10

_ERRORS = (ParamError, NoConvergence, DomainError, OverflowError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/2" and "-1e-3" through as values, not options
        self._negative_number_matcher = re.compile(r"^-(\d+/\d+|\d*\.?\d+([eE][-+]?\d+)?)$")

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class OutputSpec:
    format: str = "text"
    precision: int = 17

    def __post_init__(self) -> None:
        if self.format not in ("text", "csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not 4 <= self.precision <= 17:
            raise UsageError(f"precision must lie in [4, 17], got {self.precision}")


# -- argument types --------------------------------------------------------


def parse_number(text: str) -> Fraction:
    """``p/q`` or a decimal, kept exact so that n = 1/3 stays 1/3."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number or p/q fraction: {text!r}") from exc
    return value


def parse_strategy(text: str) -> AlphaStrategy:
    text = text.strip()
    if text == "a":
        return DefaultA()
    if text == "accel":
        return Accelerated()
    try:
        alpha = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--alpha must be 'a', 'accel' or a number, got {text!r}") from exc
    if not (math.isfinite(alpha) and alpha > 0):
        raise argparse.ArgumentTypeError(f"--alpha must be > 0, got {text!r}")
    return Custom(alpha)


def _split(values: Sequence[str]) -> list[str]:
    return [v for item in values for v in item.split(",") if v.strip()]


def strategy_label(strategy: AlphaStrategy) -> str:
    if isinstance(strategy, DefaultA):
        return "a"
    if isinstance(strategy, Accelerated):
        return "accel"
    return repr(strategy.alpha)


# -- output ----------------------------------------------------------------


def fmt_number(x: float, precision: int) -> Any:
    """Round to ``precision`` significant digits; inf becomes the string "inf"."""
    if x is None:
        return None
    if isinstance(x, bool) or isinstance(x, int):
        return x
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.{precision}g}")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: list[dict], out: OutputSpec, single: bool) -> str:
    rows = [{k: fmt_number(v, out.precision) if isinstance(v, float) else v for k, v in r.items()} for r in rows]
    if out.format == "json":
        payload = rows[0] if single else rows
        return json.dumps(payload, allow_nan=False) + "\n"
    if out.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0]) if rows else []
        writer.writerow(keys)
        for r in rows:
            writer.writerow([_cell(r[k]) for k in keys])
        return buf.getvalue()
    if single:
        width = max(len(k) for k in rows[0])
        return "".join(f"{k:<{width}}  {_cell(v)}\n" for k, v in rows[0].items())
    keys = list(rows[0]) if rows else []
    table = [keys] + [[_cell(r[k]) for k in keys] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(keys))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip() + "\n" for line in table)


def _emit(rows: list[dict], out: OutputSpec, single: bool = False) -> None:
    sys.stdout.write(render(rows, out, single))


# -- commands --------------------------------------------------------------


def cmd_eval(args: argparse.Namespace, out: OutputSpec) -> int:
    n = args.n
    method = args.method
    if method == "integral" and not integral_supported(float(n)):
        raise ParamError(f"--method integral needs n = 1/2 + m or 1/3 + m, got n={n}")
    kwargs: dict = {}
    if method in ("auto", "product"):
        kwargs = {"strategy": args.alpha, "trunc": Adaptive(args.tol)}
    result = evaluate(args.a, args.b, float(n), method, **kwargs)
    record = {
        "a": args.a,
        "b": args.b,
        "n": float(n),
        "method": result.method,
        "value": result.value,
        "error_estimate": result.error_estimate,
        "effort": result.effort,
        "divergent": result.divergent,
    }
    _emit([record], out, single=True)
    return EXIT_DIVERGENT if result.divergent else EXIT_OK


def cmd_table(args: argparse.Namespace, out: OutputSpec) -> int:
    frac = args.frac
    if not 0 < frac < 1:
        raise UsageError(f"--frac must lie strictly between 0 and 1, got {frac}")
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    params = SeriesParams(args.a, args.b)
    problem = validate(params, float(frac))
    if isinstance(problem, DivergentMarker):
        print(f"hyperterm: index {frac} is divergent (a + n b <= 0)", file=sys.stderr)
        return EXIT_DIVERGENT
    base = eval_product(problem, DefaultA(), Adaptive(TABLE_TOL)).value
    rows = [
        {"index": float(frac + j), "value": shift(params, float(frac), j, base)}
        for j in range(args.count)
    ]
    _emit(rows, out)
    return EXIT_OK


def cmd_converge(args: argparse.Namespace, out: OutputSpec) -> int:
    params = SeriesParams(args.a, args.b)
    n = float(args.n)
    problem = validate(params, n)
    if isinstance(problem, DivergentMarker):
        print(f"hyperterm: index {args.n} is divergent (a + n b <= 0)", file=sys.stderr)
        return EXIT_DIVERGENT
    exact = eval_oracle(problem).value
    rows = []
    for strategy, tol in itertools.product(args.alphas, sorted(args.tols, reverse=True)):
        result = eval_product(problem, strategy, Adaptive(tol))
        rows.append(
            {
                "strategy": strategy_label(strategy),
                "alpha": resolve_alpha(strategy, params, n),
                "tol": tol,
                "terms": result.effort,
                "abs_rel_error_vs_oracle": abs(result.value / exact - 1.0),
            }
        )
    _emit(rows, out)
    return EXIT_OK


def compare_routes(a: float, b: float, n: float) -> dict:
    """Evaluate every applicable route and the largest pairwise relative difference."""
    problem = validate(SeriesParams(a, b), n)
    record: dict = {"a": a, "b": b, "n": n}
    if isinstance(problem, DivergentMarker):
        record.update(product=math.inf, integral=math.inf, oracle=math.inf,
                      max_rel_diff=None, skipped="", divergent=True)
        return record
    values = {
        "product": eval_product(problem, DefaultA(), Adaptive(TABLE_TOL)).value,
        "integral": None,
        "oracle": eval_oracle(problem).value,
    }
    skipped = []
    if integral_supported(n):
        try:
            values["integral"] = eval_integral(problem).value
        except ParamError:
            skipped.append("integral")
    else:
        skipped.append("integral")
    present = [v for v in values.values() if v is not None]
    diff = max(
        abs(x - y) / max(abs(x), abs(y)) for x, y in itertools.combinations(present, 2)
    )
    record.update(values)
    record.update(max_rel_diff=diff, skipped=",".join(skipped), divergent=False)
    return record


def cmd_compare(args: argparse.Namespace, out: OutputSpec) -> int:
    record = compare_routes(args.a, args.b, float(args.n))
    _emit([record], out, single=True)
    if record["divergent"]:
        return EXIT_DIVERGENT
    if record["max_rel_diff"] >= COMPARE_TOL:
        print(
            f"hyperterm: routes disagree (max relative difference {record['max_rel_diff']:.3g})",
            file=sys.stderr,
        )
        return EXIT_ERROR
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


def _float(text: str) -> float:
    return float(parse_number(text))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperterm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, index: str | None) -> None:
        p.add_argument("--a", type=_float, required=True, help="first term a > 0")
        p.add_argument("--b", type=_float, required=True, help="common difference b > 0")
        if index:
            p.add_argument(f"--{index}", type=parse_number, required=True,
                           help="index, as a decimal or p/q")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--precision", type=_positive_int, default=17,
                       help="significant digits in the output (4-17)")

    p = sub.add_parser("eval", help="evaluate one term")
    common(p, "n")
    p.add_argument("--method", choices=("product", "integral", "oracle", "auto"), default="auto")
    p.add_argument("--tol", type=float, default=1e-10, help="product route tolerance")
    p.add_argument("--alpha", type=parse_strategy, default=DefaultA(),
                   help="'a', 'accel' or a positive number")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="terms at frac, frac+1, ... by one evaluation and shifts")
    common(p, "frac")
    p.add_argument("--count", type=_positive_int, default=5)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("converge", help="terms needed vs alpha strategy and tolerance")
    common(p, "n")
    p.add_argument("--alpha", action="append", default=None,
                   help="comma list of 'a', 'accel' or numbers (repeatable)")
    p.add_argument("--tol", action="append", default=None,
                   help="comma list of tolerances (repeatable)")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("compare", help="run all applicable routes and compare")
    common(p, "n")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = OutputSpec(args.format, args.precision)
        if args.command == "converge":
            alphas = _split(args.alpha or ["a,accel"])
            tols = _split(args.tol or ["1e-6,1e-8"])
            try:
                args.alphas = [parse_strategy(s) for s in alphas]
                args.tols = [float(t) for t in tols]
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(str(exc)) from exc
            if not all(0 < t < 1 for t in args.tols):
                raise UsageError("--tol values must lie in (0, 1)")
        if args.command == "eval" and not 0 < args.tol < 1:
            raise UsageError("--tol must lie in (0, 1)")
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hyperterm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ERRORS as exc:
        print(f"hyperterm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
