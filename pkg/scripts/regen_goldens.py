"""Regenerate the CLI golden files under tests/golden/.

Run only after a deliberate change to the output format or numerics, then
review the diff before committing.
"""

import contextlib
import io
import json
import sys
from pathlib import Path

from hyperterm.cli import main

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"

# name -> argv; all at --format json --precision 15
CASES = {
    "eval_wallis_half_integral": "eval --a 1 --b 1 --n 1/2 --method integral",
    "eval_wallis_half_product": "eval --a 1 --b 1 --n 1/2 --method product",
    "eval_wallis_neg_half_oracle": "eval --a 1 --b 1 --n -1/2 --method oracle",
    "eval_wallis_neg_half_product": "eval --a 1 --b 1 --n -1/2 --method product",
    "eval_wallis_neg_half_integral": "eval --a 1 --b 1 --n -1/2 --method integral",
    "eval_odd_half_integral": "eval --a 1 --b 2 --n 1/2 --method integral",
    "eval_odd_neg_half": "eval --a 1 --b 2 --n -1/2",
    "eval_wallis_third_integral": "eval --a 1 --b 1 --n 1/3 --method integral",
    "eval_wallis_third_oracle": "eval --a 1 --b 1 --n 1/3 --method oracle",
    "table_wallis_half": "table --a 1 --b 1 --frac 1/2 --count 3",
    "table_odd_half": "table --a 1 --b 2 --frac 1/2 --count 2",
    "table_wallis_third": "table --a 1 --b 1 --frac 1/3 --count 2",
    "compare_wallis_half": "compare --a 1 --b 1 --n 1/2",
    "compare_wallis_neg_half": "compare --a 1 --b 1 --n -1/2",
    "compare_odd_half": "compare --a 1 --b 2 --n 1/2",
    "compare_wallis_third": "compare --a 1 --b 1 --n 1/3",
}
SUFFIX = ["--format", "json", "--precision", "15"]


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def main_regen() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for name, cmd in CASES.items():
        argv = cmd.split() + SUFFIX
        code, out = run(argv)
        (GOLDEN / f"{name}.json").write_text(out)
        manifest[name] = {"argv": argv, "exit": code}
        print(f"{name:32s} exit={code}")
    (GOLDEN / "cases.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main_regen())
