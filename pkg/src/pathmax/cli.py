"""pathmax command line.

Exit status: 0 when the report passes, 1 when violations were found, 2 on
usage or input errors. Reports go to --output (or stdout); diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .enumeration import EnumerationRangeError
from .fa_core import WeightError, classify_weights, read_weights_csv
from .graph_core import GraphError, decode_graph6, parse_edge_list, read_graph6_file
from .path_builder import (
    PathCertificate,
    brute_force_best_connected,
    brute_force_best_path,
    certificate_payload,
    check_certificate,
    maximize_on_path,
)
from .spectra import EigenSolverError, matrix_to_csv
from . import verifier as V

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_jobs() -> int:
    env = os.environ.get("PATHMAX_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PATHMAX_JOBS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


# weights and graphs -----------------------------------------------------------

def ones_weights(n: int) -> np.ndarray:
    return np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)


def load_weights(spec: str, n: int) -> tuple[np.ndarray, str]:
    """``ones``, ``random:SEED`` or a CSV path; returns (matrix, tag stored in certificates)."""
    if spec == "ones":
        return ones_weights(n), "ones"
    if spec.startswith("random:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad random weight seed in {spec!r}") from None
        a = V.random_weights(n, "positive", V.trial_rng(seed, n))
        return a, matrix_to_csv(a)
    text = Path(spec).read_text()
    a = read_weights_csv(text)
    if a.shape != (n, n):
        raise UsageError(f"weights are {a.shape[0]}x{a.shape[1]} but the graph has {n} vertices")
    return a, matrix_to_csv(a)


def weights_from_tag(tag: str, n: int) -> np.ndarray:
    return ones_weights(n) if tag == "ones" else read_weights_csv(tag)


def load_graph(args):
    if args.graph6 and args.edges:
        raise UsageError("give either --graph6 or --edges, not both")
    if args.graph6:
        return decode_graph6(args.graph6)
    if args.edges:
        return parse_edge_list(Path(args.edges).read_text())
    raise UsageError("a graph is required (--graph6 or --edges)")


# output ---------------------------------------------------------------------

CSV_FIELDS = ["task", "status", "entry", "check", "n", "graph6", "expected", "actual", "gap"]


def report_csv(d: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    base = {"task": d["task"], "status": d["status"]}
    for n, val in d["extremal_value"].items():
        w.writerow({**base, "entry": "extremal_value", "n": n, "actual": json.dumps(val)})
    for g6 in d["extremal_graphs"]:
        w.writerow({**base, "entry": "extremal_graph", "graph6": g6})
    for v in d["violations"]:
        w.writerow({**base, "entry": "violation", **{k: v.get(k) for k in CSV_FIELDS[3:]}})
    for e in d["exhibits"]:
        w.writerow({**base, "entry": "exhibit", "n": e.get("n"), "graph6": e.get("graph6") or
                    ";".join(e.get("non_path_maximizers", [])), "actual": e.get("value")})
    return buf.getvalue()


def report_text(d: dict) -> str:
    lines = [f"{d['task']}: {d['status']}  (pathmax {d['version']})",
             f"universe scanned: {d['universe_count']}"]
    for n, val in d["extremal_value"].items():
        lines.append(f"  n={n}: extremal value {val}")
    if d["extremal_graphs"]:
        shown = d["extremal_graphs"][:12]
        more = len(d["extremal_graphs"]) - len(shown)
        lines.append("extremal graphs: " + " ".join(shown) + (f" (+{more} more)" if more > 0 else ""))
    lines.append(f"violations: {len(d['violations'])}")
    for v in d["violations"][:10]:
        lines.append(f"  {v.get('check')} n={v.get('n')} {v.get('graph6')} expected={v.get('expected')} "
                     f"actual={v.get('actual')}")
    if d["exhibits"]:
        lines.append(f"exhibits (outside hypothesis): {len(d['exhibits'])}")
    if d["elapsed_ms"] is not None:
        lines.append(f"elapsed: {d['elapsed_ms']} ms")
    return "\n".join(lines) + "\n"


def render(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    if fmt == "csv":
        return report_csv(d)
    return report_text(d)


def emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# subcommands ------------------------------------------------------------------

def _check_range(args, lo: int, hi: int):
    if not lo <= args.n_min <= args.n_max <= hi:
        raise UsageError(f"need {lo} <= --n-min <= --n-max <= {hi}, got {args.n_min}..{args.n_max}")


def cmd_verify_spectral(args):
    kind = args.matrix.upper()
    direction = args.direction or V.PATH_DIRECTION[kind]
    if direction != V.PATH_DIRECTION[kind]:
        raise UsageError(
            f"--direction {direction} with --matrix {kind} is not covered by any path-extremal result; "
            f"the relevant statement is that the {V.EXTREMAL_STATEMENT[kind]}"
        )
    graphs = None
    if args.universe == "file":
        if not args.graphs:
            raise UsageError("--universe file needs --graphs FILE")
        graphs = read_graph6_file(args.graphs)
    elif args.graphs:
        raise UsageError("--graphs is only used with --universe file")
    return V.verify_spectral(args.n_min, args.n_max, kind, direction, args.universe, graphs,
                             jobs=args.jobs, tie_rel=args.tie_tol)


def cmd_verify_fa(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    _check_range(args, 2, 6)
    weights = [read_weights_csv(Path(p).read_text()) for p in args.weights] if args.weights else None
    return V.verify_fa_max(args.n_min, args.n_max, args.trials, args.seed, args.weight_class,
                           weights=weights, check_trees=not args.no_trees)


def cmd_verify_trees(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    _check_range(args, 2, 9)
    return V.verify_trees_exhaustive(args.n_min, args.n_max, args.trials, args.seed, args.weight_class)


def cmd_verify_construction(args):
    if args.instances < 1:
        raise UsageError("--instances must be at least 1")
    _check_range(args, 2, 62)
    return V.verify_construction(args.n_min, args.n_max, args.instances, args.seed, args.weight_class)


def cmd_nath_paul(args):
    _check_range(args, 2, 32)
    return V.nath_paul_distinctness(args.n_min, args.n_max)


def cmd_tightness(args):
    if not 2 <= args.n <= 6:
        raise UsageError("--n must lie in 2..6")
    if args.trials < 0 or args.zero_budget < 0:
        raise UsageError("--trials and --zero-budget must be nonnegative")
    weights = [read_weights_csv(Path(p).read_text()) for p in args.weights] if args.weights else None
    if not weights and args.trials == 0:
        raise UsageError("nothing to search: give --trials >= 1 or --weights")
    return V.tightness_search(args.n, args.zero_budget, args.trials, args.seed, args.max_weight, weights)


def cmd_oracle(args):
    if args.weights in (None, "ones"):
        if args.n is None:
            raise UsageError("--weights ones needs --n")
        a = ones_weights(args.n)
    elif args.weights.startswith("random:"):
        if args.n is None:
            raise UsageError("--weights random:SEED needs --n")
        a, _ = load_weights(args.weights, args.n)
    else:
        a = read_weights_csv(Path(args.weights).read_text())
    n = a.shape[0]
    if not 2 <= n <= 6:
        raise UsageError("the connected-graph oracle covers 2 <= n <= 6")
    value, maximizers = brute_force_best_connected(a)
    best = brute_force_best_path(a)
    return {
        "task": "oracle", "version": __version__, "n": n, "weights": matrix_to_csv(a),
        "weight_class": classify_weights(a)._asdict(),
        "best_connected_value": value, "maximizers": maximizers,
        "best_path_value": best.value, "best_path": list(best.path),
        "status": "PASS" if value == best.value else "FAIL",
    }


def cmd_build_path(args):
    if args.check:
        payload = json.loads(Path(args.check).read_text())
        try:
            g = decode_graph6(payload["input_graph6"])
            a = weights_from_tag(payload["weights"], g.n)
            cert = PathCertificate.from_dict(payload)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed certificate file: {exc}") from None
        problems = check_certificate(g, a, cert)
        return {"task": "check-certificate", "version": __version__, "input_graph6": payload["input_graph6"],
                "status": "FAIL" if problems else "PASS", "problems": problems}
    g = load_graph(args)
    a, tag = load_weights(args.weights, g.n)
    cert = maximize_on_path(g, a)
    return certificate_payload(g, tag, cert)


def _common(p):
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as null (byte-stable reports)")


def _nrange(p, n_min=2, n_max=None):
    p.add_argument("--n-min", type=int, default=n_min)
    p.add_argument("--n-max", type=int, default=n_max, required=n_max is None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathmax", description="Path-maximization checks and certificates.")
    ap.add_argument("--version", action="version", version=f"pathmax {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-spectral", help="only paths attain the extremal largest eigenvalue")
    _nrange(p)
    p.add_argument("--matrix", required=True, type=str.upper, choices=V.MATRIX_KINDS)
    p.add_argument("--direction", choices=("max", "min"))
    p.add_argument("--universe", choices=("connected", "trees", "file"), default="connected")
    p.add_argument("--graphs", help="graph6 file for --universe file")
    p.add_argument("--tie-tol", type=float, default=V.TIE_REL, help="relative tie tolerance")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: PATHMAX_JOBS or CPU count)")
    _common(p)
    p.set_defaults(func=cmd_verify_spectral)

    p = sub.add_parser("verify-fa", help="max of F_A over connected graphs versus paths")
    _nrange(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-class", choices=V.WEIGHT_CLASSES, default="positive")
    p.add_argument("--weights", nargs="+", help="explicit weight CSV files (replace random draws)")
    p.add_argument("--no-trees", action="store_true", help="skip the per-tree construction check")
    _common(p)
    p.set_defaults(func=cmd_verify_fa)

    p = sub.add_parser("verify-trees", help="construction over every labeled tree")
    _nrange(p)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-class", choices=V.WEIGHT_CLASSES, default="N_n")
    _common(p)
    p.set_defaults(func=cmd_verify_trees)

    p = sub.add_parser("verify-construction", help="random trees, certificate soundness and replay")
    _nrange(p, 8, 9)
    p.add_argument("--instances", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-class", choices=V.WEIGHT_CLASSES, default="nonneg")
    _common(p)
    p.set_defaults(func=cmd_verify_construction)

    p = sub.add_parser("build-path", help="construct a path certificate for one graph")
    p.add_argument("--graph6")
    p.add_argument("--edges", help="edge-list file: 'n m' then one 'i j' per line")
    p.add_argument("--weights", default="ones", help="ones | random:SEED | CSV file")
    p.add_argument("--check", metavar="CERT", help="re-verify a certificate JSON file instead")
    _common(p)
    p.set_defaults(func=cmd_build_path)

    p = sub.add_parser("oracle", help="brute-force best connected graph and best path")
    p.add_argument("--weights", help="ones | random:SEED | CSV file (default ones)")
    p.add_argument("--n", type=int)
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("nath-paul", help="distinct entries of the top distance Laplacian eigenvector of P_n")
    _nrange(p, 2, 12)
    _common(p)
    p.set_defaults(func=cmd_nath_paul)

    p = sub.add_parser("tightness", help="search for non-path maximizers outside the hypothesis class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zero-budget", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-weight", type=int, default=100)
    p.add_argument("--weights", nargs="+", help="extra explicit weight CSV files")
    _common(p)
    p.set_defaults(func=cmd_tightness)
    return ap


def run(args) -> int:
    if getattr(args, "jobs", 0) is None:
        args.jobs = default_jobs()
    result = args.func(args)
    if isinstance(result, V.VerificationReport):
        d = result.to_dict(timing=not args.no_timing)
    else:
        d = result
    if args.format != "json" and "universe_count" not in d:
        if args.format == "csv":
            raise UsageError("csv output is only available for verification reports")
        text = "\n".join(f"{k}: {v}" for k, v in d.items()) + "\n"
    else:
        text = render(d, args.format)
    emit(text, args.output)
    return EXIT_PASS if d.get("status", "PASS") == "PASS" else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (UsageError, GraphError, WeightError, EnumerationRangeError, ValueError, OSError) as exc:
        print(f"pathmax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EigenSolverError as exc:
        print(f"pathmax: eigensolver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
