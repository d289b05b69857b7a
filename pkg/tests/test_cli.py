import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import GAMMA_4_3, HALF_SQRT_PI, SQRT_PI, lgamma_delta
from hyperterm.cli import (
    EXIT_DIVERGENT,
    EXIT_ERROR,
    EXIT_OK,
    EXIT_USAGE,
    OutputSpec,
    UsageError,
    compare_routes,
    fmt_number,
    main,
    parse_number,
)

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run(capsys, [*argv, "--format", "json"])
    return code, json.loads(out) if out else None, err


def assert_close(got, want, rel=1e-13, path="$"):
    if isinstance(want, dict):
        assert set(got) == set(want), path
        for k in want:
            assert_close(got[k], want[k], rel, f"{path}.{k}")
    elif isinstance(want, list):
        assert len(got) == len(want), path
        for i, (g, w) in enumerate(zip(got, want)):
            assert_close(g, w, rel, f"{path}[{i}]")
    elif isinstance(want, float) and not isinstance(want, bool):
        # the last printed digit may differ across libm builds
        assert got == pytest.approx(want, rel=rel, abs=1e-300), path
    else:
        assert got == want, path


# -- goldens ---------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(capsys, name):
    case = CASES[name]
    code, out, _ = run(capsys, case["argv"])
    assert code == case["exit"]
    want = json.loads((GOLDEN / f"{name}.json").read_text())
    assert_close(json.loads(out), want)


def test_golden_values_match_constants():
    half = json.loads((GOLDEN / "eval_wallis_half_integral.json").read_text())
    assert half["value"] == pytest.approx(HALF_SQRT_PI, rel=1e-14)
    neg = json.loads((GOLDEN / "eval_wallis_neg_half_oracle.json").read_text())
    assert neg["value"] == pytest.approx(SQRT_PI, rel=1e-14)
    third = json.loads((GOLDEN / "eval_wallis_third_integral.json").read_text())
    assert third["value"] == pytest.approx(GAMMA_4_3, rel=1e-14)


# -- number handling -------------------------------------------------------


def test_parse_number_keeps_fractions_exact():
    assert parse_number("1/3") * 3 == 1
    assert parse_number("-1/2") == parse_number("-0.5")


@pytest.mark.parametrize("x", [HALF_SQRT_PI, 1 / 3, 1e-300, 2.0 ** 0.5, 123456.789])
def test_fmt_number_precision_17_round_trips(x):
    assert fmt_number(x, 17) == x
    assert json.loads(json.dumps(fmt_number(x, 17))) == x


def test_fmt_number_special_values():
    assert fmt_number(math.inf, 17) == "inf"
    assert fmt_number(math.nan, 17) is None
    assert fmt_number(None, 17) is None
    assert fmt_number(7, 4) == 7
    assert fmt_number(1.23456789, 4) == 1.235


def test_json_value_is_bit_exact_at_precision_17(capsys):
    from hyperterm import evaluate

    code, rec, _ = run_json(capsys, ["eval", "--a", "1", "--b", "1", "--n", "1/2", "--method", "integral"])
    assert code == EXIT_OK
    assert rec["value"] == evaluate(1.0, 1.0, 0.5, "integral").value


@pytest.mark.parametrize("precision", [3, 18])
def test_output_spec_rejects_precision(precision):
    with pytest.raises(UsageError):
        OutputSpec("json", precision)


# -- exit codes ------------------------------------------------------------


def test_exit_ok(capsys):
    code, rec, _ = run_json(capsys, ["eval", "--a", "2", "--b", "3", "--n", "3", "--method", "oracle"])
    assert code == EXIT_OK
    assert rec["value"] == pytest.approx(2 * 5 * 8, rel=1e-13)


def test_exit_divergent(capsys):
    code, rec, _ = run_json(capsys, ["eval", "--a", "1", "--b", "2", "--n=-1/2"])
    assert code == EXIT_DIVERGENT
    assert rec["divergent"] is True
    assert rec["value"] == "inf"
    assert rec["error_estimate"] is None


def test_negative_index_without_equals_sign(capsys):
    code, rec, _ = run_json(capsys, ["eval", "--a", "1", "--b", "1", "--n", "-1/2", "--method", "oracle"])
    assert code == EXIT_OK
    assert rec["value"] == pytest.approx(SQRT_PI, rel=1e-13)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--a", "1", "--b", "1", "--n", "0.3", "--method", "integral"],  # no reduction
        ["eval", "--a", "0.25", "--b", "1", "--n", "1/3", "--method", "integral"],  # a <= b/3
        ["eval", "--a", "-1", "--b", "1", "--n", "1"],
        ["eval", "--a", "1", "--b", "1", "--n", "0.5", "--tol", "1e-15"],  # too tight for the budget
    ],
)
def test_exit_error(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == EXIT_ERROR
    assert out == ""
    assert err.startswith("hyperterm:")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["eval", "--a", "1", "--b", "1"],
        ["eval", "--a", "1", "--b", "1", "--n", "x"],
        ["eval", "--a", "1", "--b", "1", "--n", "1", "--format", "xml"],
        ["eval", "--a", "1", "--b", "1", "--n", "1", "--precision", "40"],
        ["eval", "--a", "1", "--b", "1", "--n", "1", "--alpha", "-2"],
        ["eval", "--a", "1", "--b", "1", "--n", "1", "--tol", "2"],
        ["table", "--a", "1", "--b", "1", "--frac", "3/2"],
        ["converge", "--a", "1", "--b", "1", "--n", "1", "--tol", "0"],
        ["converge", "--a", "1", "--b", "1", "--n", "1", "--alpha", "a,zzz"],
    ],
)
def test_exit_usage(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == EXIT_USAGE


# -- table -----------------------------------------------------------------


@pytest.mark.parametrize("a,b,frac", [(1, 1, "1/2"), (2, 3, "1/3"), (0.5, 2, "0.7")])
def test_table_follows_recurrence(capsys, a, b, frac):
    code, rows, _ = run_json(capsys, ["table", "--a", str(a), "--b", str(b), "--frac", frac, "--count", "6"])
    assert code == EXIT_OK
    assert len(rows) == 6
    for prev, cur in zip(rows, rows[1:]):
        assert cur["index"] == pytest.approx(prev["index"] + 1)
        factor = a + prev["index"] * b
        assert cur["value"] == pytest.approx(prev["value"] * factor, rel=1e-12)
    n0 = rows[0]["index"]
    assert rows[0]["value"] == pytest.approx(lgamma_delta(a, b, n0), rel=1e-9)


def test_table_rejects_frac_outside_unit_interval(capsys):
    code, _, err = run(capsys, ["table", "--a", "0.1", "--b", "1", "--frac", "-0.5"])
    assert code == EXIT_USAGE
    assert "--frac" in err


# -- converge --------------------------------------------------------------


def test_converge_defaults(capsys):
    code, rows, _ = run_json(capsys, ["converge", "--a", "1", "--b", "1", "--n", "1/2"])
    assert code == EXIT_OK
    assert [(r["strategy"], r["tol"]) for r in rows] == [
        ("a", 1e-6), ("a", 1e-8), ("accel", 1e-6), ("accel", 1e-8)
    ]
    by = {(r["strategy"], r["tol"]): r for r in rows}
    assert by[("accel", 1e-8)]["terms"] < by[("a", 1e-8)]["terms"]
    assert by[("accel", 1e-8)]["alpha"] == 0.75
    for r in rows:
        assert r["abs_rel_error_vs_oracle"] < r["tol"]


def test_converge_terms_monotone_in_tol(capsys):
    code, rows, _ = run_json(
        capsys,
        ["converge", "--a", "2", "--b", "3", "--n", "0.7", "--alpha", "a", "--tol", "1e-4,1e-10,1e-6", "--tol", "1e-8"],
    )
    assert code == EXIT_OK
    assert [r["tol"] for r in rows] == [1e-4, 1e-6, 1e-8, 1e-10]
    terms = [r["terms"] for r in rows]
    assert terms == sorted(terms)


def test_converge_n_one_uses_minimum_terms(capsys):
    code, rows, _ = run_json(capsys, ["converge", "--a", "1.3", "--b", "0.7", "--n", "1", "--alpha", "a,accel,2.5"])
    assert code == EXIT_OK
    by = {r["strategy"]: r for r in rows if r["tol"] == 1e-8}
    # alpha = a makes every factor exactly one
    assert by["a"]["terms"] == by["accel"]["terms"] == 64
    assert by["2.5"]["terms"] > 64


# -- compare ---------------------------------------------------------------


def test_compare_skips_integral_off_reduction():
    rec = compare_routes(2.0, 3.0, 0.7)
    assert rec["integral"] is None
    assert rec["skipped"] == "integral"
    assert rec["max_rel_diff"] < 1e-9


def test_compare_divergent(capsys):
    code, rec, _ = run_json(capsys, ["compare", "--a", "1", "--b", "2", "--n=-1/2"])
    assert code == EXIT_DIVERGENT
    assert rec["divergent"] is True
    assert rec["product"] == rec["oracle"] == "inf"
    assert rec["max_rel_diff"] is None


def test_compare_agrees_on_third_shift(capsys):
    code, rec, _ = run_json(capsys, ["compare", "--a", "3", "--b", "2", "--n", "7/3"])
    assert code == EXIT_OK
    assert rec["skipped"] == ""
    assert rec["max_rel_diff"] < 1e-9


# -- formats ---------------------------------------------------------------


def test_csv_format(capsys):
    code, out, _ = run(capsys, ["table", "--a", "1", "--b", "1", "--frac", "1/2", "--count", "3", "--format", "csv"])
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["index"]) for r in rows] == [0.5, 1.5, 2.5]
    assert float(rows[0]["value"]) == pytest.approx(HALF_SQRT_PI, rel=1e-10)


def test_text_format(capsys):
    code, out, _ = run(capsys, ["eval", "--a", "1", "--b", "1", "--n", "2", "--precision", "6"])
    assert code == EXIT_OK
    fields = dict(line.split(None, 1) for line in out.strip().splitlines())
    assert float(fields["value"]) == pytest.approx(2.0, rel=1e-6)
    assert fields["divergent"] == "false"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hyperterm", "eval", "--a", "1", "--b", "1", "--n", "1/2",
         "--method", "oracle", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["value"] == pytest.approx(HALF_SQRT_PI, rel=1e-13)
