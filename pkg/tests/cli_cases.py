"""Golden CLI invocations, run from tests/data. Shared by test_cli.py and
golden/regenerate.py."""

import io
import json
import os

from geninv.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "data")
GOLDEN = os.path.join(HERE, "golden")

GOLDEN_CASES = {
    "pinv_oracle": ["pinv", "A51.mtx"],
    "pinv_oracle_zero": ["pinv", "zero.mtx"],
    "pinv_reverse_order": ["pinv", "--C", "C51.mtx", "--R", "R51.mtx", "--method", "reverse_order"],
    "pinv_corrected": ["pinv", "A51.mtx", "--method", "corrected"],
    "pinv_corrected_counterexample": ["pinv", "--C", "C1.mtx", "--R", "R1.mtx", "--method", "corrected"],
    "pinv_macduffee": ["pinv", "A51.mtx", "--method", "macduffee"],
    "pinv_randomized": ["pinv", "A51.mtx", "--method", "randomized", "--P", "P52.mtx", "--Q", "Q52.mtx"],
    "pinv_orthogonal": ["pinv", "A51.mtx", "--method", "orthogonal", "--seed", "9"],
    "pinv_csv": ["pinv", "A51.csv", "--method", "corrected"],
    "geninv_randomized": ["geninv", "A51.mtx", "--method", "randomized", "--P", "P52.mtx", "--Q", "Q52.mtx"],
    "geninv_compact": ["geninv", "A51.mtx", "--method", "compact", "--P", "P52.mtx", "--Q", "Q52.mtx"],
    "geninv_qr": ["geninv", "Aqr.mtx", "--method", "qr"],
    "verify_pseudoinverse": ["verify", "A51.mtx", "A51pinv.mtx", "--require", "pseudoinverse"],
    "verify_one_inverse": ["verify", "A42.mtx", "Ag42.mtx", "--require", "one_inverse"],
    "cur": ["cur", "A51.mtx", "--rows", "0,1", "--cols", "0,1"],
    "nystrom": ["nystrom", "A51.mtx", "--P", "P52.mtx", "--Q", "Q52.mtx"],
    "sensor_identity": ["sensor", "eye3.mtx", "-p", "2"],
    "sensor_signal": ["sensor", "lowrank.mtx", "-p", "2", "--signal", "signal.mtx"],
    "sensor_lu": ["sensor", "lowrank.mtx", "--method", "lu", "-p", "2", "-q", "2"],
    "resistance_exact": ["resistance", "path4.edges", "--all", "--one-based"],
    "resistance_submatrix": ["resistance", "path4.edges", "--all", "--one-based",
                             "--estimate", "submatrix", "--triples", "1,2,4;1,2,3"],
    "resistance_randomized": ["resistance", "path4.edges", "--pairs", "1,4", "--one-based",
                              "--estimate", "randomized", "--sketch", "orthonormal",
                              "-p", "4", "-q", "4", "--seed", "8"],
    "sketch_column_select": ["sketch", "A51.mtx", "--sketch", "column_select",
                             "--rows", "0,1", "--cols", "0,1"],
    "sketch_gaussian": ["sketch", "A51.mtx", "-p", "2", "-q", "2", "--seed", "123"],
}


def run(argv, env_seed=None):
    """Run the CLI in tests/data; return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    old = os.environ.pop("GENINV_SEED", None)
    if env_seed is not None:
        os.environ["GENINV_SEED"] = str(env_seed)
    try:
        os.chdir(DATA)
        code = main(list(argv), stdout=out, stderr=err)
    finally:
        os.chdir(cwd)
        os.environ.pop("GENINV_SEED", None)
        if old is not None:
            os.environ["GENINV_SEED"] = old
    return code, out.getvalue(), err.getvalue()


def run_json(argv, **kw):
    code, out, err = run(list(argv) + ["--json"], **kw)
    report = json.loads(out) if out else None
    if report is not None:
        report.pop("timing_ms", None)
    return code, report, err
