"""Rewrite the golden JSON reports: python tests/golden/regenerate.py"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli_cases import GOLDEN, GOLDEN_CASES, run_json  # noqa: E402

for name, argv in GOLDEN_CASES.items():
    code, report, err = run_json(argv)
    if code != 0:
        raise SystemExit(f"{name}: exit {code}: {err}")
    with open(os.path.join(GOLDEN, f"{name}.json"), "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote", name)
