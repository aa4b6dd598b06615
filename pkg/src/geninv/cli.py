"""Command-line front end.

Every subcommand reads dense matrices (Matrix Market array or CSV) or an
edge list, runs one library operation and emits either the result matrix
or, with ``--json``, a versioned run report.

Exit codes: 0 success, 1 I/O, parse or usage error, 2 a mathematical
precondition does not hold.
"""

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import applications, geninverse, graph, randomized
from .errors import ConvergenceError, PreconditionError
from .factorization import CRFactorization, cr_factorize
from .io import FORMATS, MatrixFormatError, format_csv, guess_format, read_matrix, write_matrix
from .linalg import numeric_rank, pinv_oracle

SCHEMA = 1
INLINE_LIMIT = 12
SEED_ENV = "GENINV_SEED"

EXIT_OK, EXIT_IO, EXIT_PRECONDITION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# run report


class RunReport:
    def __init__(self, command, args):
        self.command = command
        self.args = args
        self.inputs = {}
        self.outputs = {}
        self.residuals = None
        self.seed = None
        self.t0 = time.perf_counter()
        self.primary = None
        self.failure = None

    def add_input(self, name, path):
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        self.inputs[name] = {"path": str(path), "sha256": digest}

    def add_matrix(self, name, M, primary=False):
        M = np.atleast_2d(np.asarray(M, dtype=float))
        self.outputs[name] = M
        if primary:
            self.primary = name

    def add_value(self, name, value):
        self.outputs[name] = value

    def _matrix_entry(self, name, M):
        if M.shape[0] <= INLINE_LIMIT and M.shape[1] <= INLINE_LIMIT:
            return {"shape": list(M.shape), "data": M.tolist()}
        fmt = self.args.format or "mm"
        ext = ".mtx" if fmt == "mm" else ".csv"
        stem = os.path.splitext(self.args.out)[0] if self.args.out else f"geninv_{self.command}"
        path = f"{stem}_{name}{ext}"
        write_matrix(path, M, fmt)
        return {"shape": list(M.shape), "path": path}

    def as_dict(self):
        outputs = {}
        for name, v in self.outputs.items():
            outputs[name] = self._matrix_entry(name, v) if isinstance(v, np.ndarray) else v
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": outputs,
            "residuals": self.residuals,
            "timing_ms": round(1000.0 * (time.perf_counter() - self.t0), 3),
            "seed": self.seed,
        }

    def emit(self, stream):
        args = self.args
        if self.primary is not None and args.out:
            write_matrix(args.out, self.outputs[self.primary], args.format or guess_format(args.out))
        if args.json:
            json.dump(self.as_dict(), stream, indent=2, allow_nan=False)
            stream.write("\n")
            return
        for name, v in self.outputs.items():
            if isinstance(v, np.ndarray):
                if name == self.primary and args.out:
                    stream.write(f"{name}: written to {args.out}\n")
                else:
                    stream.write(f"{name} ({v.shape[0]}x{v.shape[1]}):\n")
                    stream.write(format_csv(v))
            else:
                stream.write(f"{name}: {json.dumps(v)}\n")
        if self.residuals is not None:
            r = self.residuals
            stream.write("residuals: " + " ".join(
                f"{k}={r[k]:.3e}" for k in ("r1", "r2", "r3", "r4")) + "\n")
            stream.write(f"classification: {r['classification']}\n")


# --------------------------------------------------------------------------
# argument helpers


def _read(report, name, path):
    # input formats are always detected from the extension or header;
    # --format only selects the output format
    A = read_matrix(path)
    report.add_input(name, path)
    return A


def _index_list(text, one_based):
    if text is None:
        return None
    try:
        idx = [int(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse index list {text!r}") from None
    return [i - 1 for i in idx] if one_based else idx


def _shift(indices, one_based):
    return [int(i) + (1 if one_based else 0) for i in indices]


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    # fresh entropy, reported so the run can be repeated
    return int(np.random.SeedSequence().entropy % 2**64)


def _sketch(args, report, m, n, A=None, default_kind="gaussian"):
    """SketchPair from --P/--Q files, explicit --rows/--cols or a generator."""
    if args.P or args.Q:
        if not (args.P and args.Q):
            raise UsageError("--P and --Q must be given together")
        P = _read(report, "P", args.P)
        Q = _read(report, "Q", args.Q)
        return randomized.SketchPair(P, Q, "user")
    kind = args.sketch or default_kind
    rows = _index_list(args.rows, args.one_based)
    cols = _index_list(args.cols, args.one_based)
    if kind == "column_select" and rows is not None and cols is not None:
        return randomized.make_sketch(kind, m, n, len(rows), len(cols), None, rows, cols)
    p, q = args.p, args.q
    if p is None or q is None:
        r = numeric_rank(A).numeric_rank if A is not None else min(m, n)
        p = randomized.oversampled_width(r, m) if p is None else p
        q = randomized.oversampled_width(r, n) if q is None else q
    seed = _seed(args)
    report.seed = seed
    return randomized.make_sketch(kind, m, n, p, q, seed, rows, cols)


def _add_sketch_options(sp):
    g = sp.add_argument_group("sketch")
    g.add_argument("--sketch", choices=("gaussian", "orthonormal", "column_select"),
                   help="generated sketch kind")
    g.add_argument("-p", type=int, help="row sketch width")
    g.add_argument("-q", type=int, help="column sketch width")
    g.add_argument("--rows", help="row indices, e.g. 0,2,5")
    g.add_argument("--cols", help="column indices")
    g.add_argument("--P", help="explicit m-by-p row sketch file")
    g.add_argument("--Q", help="explicit n-by-q column sketch file")


# --------------------------------------------------------------------------
# subcommands


def cmd_pinv(args, report):
    method = args.method
    if args.C or args.R:
        if not (args.C and args.R):
            raise UsageError("--C and --R must be given together")
        F = CRFactorization(_read(report, "C", args.C),
                            _read(report, "R", args.R))
        A = F.product
    elif args.input:
        A = _read(report, "A", args.input)
        F = None
    else:
        raise UsageError("need an input matrix or --C/--R")
    m, n = A.shape
    if method == "oracle":
        G = pinv_oracle(A, tol=args.tol)
    elif method in ("reverse_order", "corrected", "macduffee"):
        if F is None:
            F = cr_factorize(A, args.tol)
        if method == "reverse_order":
            G = geninverse.pinv_reverse_order(F, args.tol)
        elif method == "corrected":
            G = geninverse.pinv_corrected(F.C, F.R)
        else:
            G = geninverse.pinv_macduffee(F, args.tol)
    elif method == "randomized":
        sk = _sketch(args, report, m, n, A)
        report.add_value("rank_preservation", randomized.check_rank_preservation(A, sk).as_dict())
        G = randomized.pinv_randomized(A, sk)
    elif method == "orthogonal":
        if args.p is None:
            args.p = m
        if args.q is None:
            args.q = n
        sk = _sketch(args, report, m, n, A, default_kind="orthonormal")
        G = randomized.pinv_orthogonal_sketch(A, sk)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown method {method}")
    report.add_matrix("pinv", G, primary=True)
    report.residuals = geninverse.verify_penrose(A, G).as_dict()


def cmd_geninv(args, report):
    A = _read(report, "A", args.input)
    m, n = A.shape
    rtol = args.tol
    if args.method == "qr":
        G = randomized.one_inverse_qr(A, rtol=rtol)
    elif args.method == "blocks":
        r = numeric_rank(A).numeric_rank
        spec = geninverse.OneInverseSpec.zeros(r, m, n)
        blocks = {}
        for name in ("Z12", "Z21", "Z22"):
            path = getattr(args, name)
            blocks[name] = _read(report, name, path) if path else getattr(spec, name)
        G = geninverse.construct_one_inverse(A, geninverse.OneInverseSpec(**blocks))
    else:
        sk = _sketch(args, report, m, n, A)
        report.add_value("rank_preservation",
                         randomized.check_rank_preservation(A, sk, rtol=rtol).as_dict())
        if args.method == "randomized":
            G = randomized.geninv_randomized(A, sk, rtol=rtol)
        else:
            G = randomized.geninv_compact(A, sk, rtol=rtol)
    report.add_matrix("geninv", G, primary=True)
    report.residuals = geninverse.verify_penrose(A, G).as_dict()


def cmd_verify(args, report):
    A = _read(report, "A", args.A)
    G = _read(report, "G", args.G)
    if G.shape != A.shape[::-1]:
        raise MatrixFormatError(
            f"shape mismatch: G is {G.shape[0]}x{G.shape[1]}, expected {A.shape[1]}x{A.shape[0]}")
    rep = geninverse.verify_penrose(A, G, args.tol)
    report.residuals = rep.as_dict()
    report.add_value("classification", rep.classification.value)
    report.add_value("required", args.require)
    if not rep.classification.at_least(args.require):
        report.failure = (f"classification {rep.classification.value} is below "
                          f"the required level {args.require}")
        return EXIT_PRECONDITION
    return EXIT_OK


def cmd_cur(args, report):
    A = _read(report, "A", args.input)
    rows = _index_list(args.rows, args.one_based)
    cols = _index_list(args.cols, args.one_based)
    if rows is None or cols is None:
        raise UsageError("cur needs --rows and --cols")
    G = applications.cur_pinv(A, rows, cols, rtol=args.tol)
    report.add_matrix("pinv", G, primary=True)
    report.residuals = geninverse.verify_penrose(A, G).as_dict()


def cmd_nystrom(args, report):
    A = _read(report, "A", args.input)
    m, n = A.shape
    sk = _sketch(args, report, m, n, A)
    A_hat, rec = applications.generalized_nystrom(A, sk, rtol=args.tol)
    report.add_matrix("A_hat", A_hat, primary=True)
    report.add_value("reconstruction", rec.as_dict())


def cmd_sensor(args, report):
    A = _read(report, "A", args.input)
    if args.p is None:
        raise UsageError("sensor needs -p")
    if args.method == "qr":
        placement = applications.sensor_place_qr(A, args.p)
    else:
        placement = applications.sensor_place_lu(A, args.p, args.q)
    report.add_value("rows", _shift(placement.row_indices, args.one_based))
    if placement.col_indices is not None:
        report.add_value("cols", _shift(placement.col_indices, args.one_based))
    if args.signal:
        y = _read(report, "signal", args.signal).ravel()
        y_e = applications.reconstruct_signal(A, placement, y, rtol=args.tol)
        report.add_matrix("reconstruction", y_e[:, None], primary=True)
        ny = float(np.linalg.norm(y))
        err = float(np.linalg.norm(y - y_e))
        report.add_value("relative_error", err / ny if ny > 0 else err)


def _pairs(text, one_based, n):
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        idx = _index_list(chunk, one_based)
        if len(idx) != 2:
            raise UsageError(f"a pair needs two nodes, got {chunk!r}")
        out.append(tuple(idx))
    for pr in out:
        if any(not 0 <= v < n for v in pr) or pr[0] == pr[1]:
            raise PreconditionError(f"invalid node pair {_shift(pr, one_based)} for {n} nodes")
    return out


def cmd_resistance(args, report):
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    g = graph.parse_edge_list(text, one_based=args.one_based)
    report.add_input("graph", args.input)
    if args.nodes is not None:
        if args.nodes < g.node_count:
            raise UsageError(f"--nodes {args.nodes} is below the largest node in the edge list")
        g = graph.WeightedGraph(args.nodes, g.edges)
    n = g.node_count
    L = graph.laplacian(g)
    if args.all:
        pairs = graph.all_pairs(n)
    elif args.pairs:
        pairs = _pairs(args.pairs, args.one_based, n)
    else:
        raise UsageError("resistance needs --pairs or --all")
    ob = args.one_based
    rows = []
    if args.estimate == "randomized":
        sk = _sketch(args, report, n, n, L)
        Rr = graph.resistance_randomized(L, sk)
        connected = len(graph.laplacian_components(L)) == 1
        R = graph.resistance_matrix(L) if connected else None
        for i, j in pairs:
            row = {"i": i + ob, "j": j + ob, "approx": float(Rr[i, j])}
            if R is not None:
                row["exact"] = float(R[i, j])
                row["epsilon"] = row["exact"] - row["approx"]
            rows.append(row)
        gamma = graph.gamma_bound(L) if connected else None
    else:
        ests = graph.resistance_estimates(L, pairs)
        gamma = ests[0].gamma if ests else graph.gamma_bound(L)
        for e in ests:
            row = {"i": e.i + ob, "j": e.j + ob, "exact": e.exact}
            if args.estimate == "submatrix":
                row.update(approx=e.approx, epsilon=e.epsilon)
            rows.append(row)
    report.add_value("estimate", args.estimate)
    report.add_value("pairs", rows)
    report.add_value("gamma", gamma)
    if args.triples:
        if gamma is None:
            raise graph.DisconnectedGraphError(
                "ordering inference needs a connected graph",
                components=graph.laplacian_components(L))
        verdicts = []
        for chunk in args.triples.split(";"):
            if not chunk.strip():
                continue
            idx = _index_list(chunk, ob)
            if len(idx) != 3:
                raise UsageError(f"a triple needs three nodes, got {chunk!r}")
            i, j, k = idx
            rt_ij = graph.resistance_submatrix(L, i, j)
            rt_ik = graph.resistance_submatrix(L, i, k)
            v = graph.infer_ordering(rt_ij, rt_ik, gamma)
            verdicts.append({"i": i + ob, "j": j + ob, "k": k + ob,
                             "approx_ij": rt_ij, "approx_ik": rt_ik, "verdict": v.verdict})
        report.add_value("orderings", verdicts)


def cmd_sketch(args, report):
    A = _read(report, "A", args.input)
    m, n = A.shape
    sk = _sketch(args, report, m, n, A)
    report.add_value("kind", sk.kind)
    report.add_matrix("P", sk.P, primary=True)
    report.add_matrix("Q", sk.Q)
    report.add_value("rank_preservation",
                     randomized.check_rank_preservation(A, sk, rtol=args.tol).as_dict())


COMMANDS = {
    "pinv": cmd_pinv,
    "geninv": cmd_geninv,
    "verify": cmd_verify,
    "cur": cmd_cur,
    "nystrom": cmd_nystrom,
    "sensor": cmd_sensor,
    "resistance": cmd_resistance,
    "sketch": cmd_sketch,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS,
                        help="output matrix format (default: from the --out extension); "
                             "inputs are detected from extension or header")
    common.add_argument("--out", help="write the main result matrix here")
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--tol", type=float, help="rank / classification tolerance")
    common.add_argument("--seed", type=int, help=f"sketch seed (fallback: ${SEED_ENV})")
    common.add_argument("--one-based", action="store_true",
                        help="index lists and edge lists are 1-based")

    parser = _Parser(prog="geninv", description="Generalized and sketched matrix inverses.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("pinv", parents=[common], help="pseudoinverse by a chosen formula")
    sp.add_argument("input", nargs="?", help="matrix file")
    sp.add_argument("--method", default="oracle",
                    choices=("oracle", "reverse_order", "corrected", "macduffee",
                             "randomized", "orthogonal"))
    sp.add_argument("--C", help="left factor file (instead of input)")
    sp.add_argument("--R", help="right factor file (instead of input)")
    _add_sketch_options(sp)

    sp = sub.add_parser("geninv", parents=[common], help="{1}- and {1,2}-inverses")
    sp.add_argument("input")
    sp.add_argument("--method", default="compact",
                    choices=("randomized", "compact", "qr", "blocks"))
    for name in ("Z12", "Z21", "Z22"):
        sp.add_argument(f"--{name}", help=f"{name} block file for --method blocks")
    _add_sketch_options(sp)

    sp = sub.add_parser("verify", parents=[common], help="Penrose residuals of a candidate")
    sp.add_argument("A")
    sp.add_argument("G")
    sp.add_argument("--require", default="not_an_inverse",
                    choices=[c.value for c in geninverse.Classification])

    sp = sub.add_parser("cur", parents=[common], help="CUR pseudoinverse A(I,:)^+ A(I,J) A(:,J)^+")
    sp.add_argument("input")
    sp.add_argument("--rows", required=True)
    sp.add_argument("--cols", required=True)

    sp = sub.add_parser("nystrom", parents=[common], help="generalized Nystrom reconstruction")
    sp.add_argument("input")
    _add_sketch_options(sp)

    sp = sub.add_parser("sensor", parents=[common], help="sensor placement and reconstruction")
    sp.add_argument("input")
    sp.add_argument("--method", default="qr", choices=("qr", "lu"))
    sp.add_argument("-p", type=int)
    sp.add_argument("-q", type=int)
    sp.add_argument("--signal", help="signal vector file to reconstruct")

    sp = sub.add_parser("resistance", parents=[common], help="effective resistances")
    sp.add_argument("input", help="edge list: 'i j w' per line")
    sp.add_argument("--pairs", help="node pairs, e.g. '0,1;0,2'")
    sp.add_argument("--all", action="store_true", help="all node pairs")
    sp.add_argument("--triples", help="ordering queries 'i,j,k;...' comparing R_ij with R_ik")
    sp.add_argument("--estimate", default="exact", choices=("exact", "submatrix", "randomized"))
    sp.add_argument("--nodes", type=int, help="node count (default: largest index + 1)")
    _add_sketch_options(sp)

    sp = sub.add_parser("sketch", parents=[common], help="generate a sketch and check rank preservation")
    sp.add_argument("input")
    _add_sketch_options(sp)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("geninv: a subcommand is required")
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_IO
    report = RunReport(args.command, args)
    try:
        code = COMMANDS[args.command](args, report) or EXIT_OK
        report.emit(stdout)
        if report.failure:
            stderr.write(f"geninv {args.command}: {report.failure}\n")
        return code
    except (PreconditionError, ConvergenceError) as exc:
        stderr.write(f"geninv {args.command}: {exc}\n")
        return EXIT_PRECONDITION
    except (UsageError, MatrixFormatError, OSError, ValueError) as exc:
        stderr.write(f"geninv {args.command}: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
