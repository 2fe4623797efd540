"""Command-line front end.

Exit codes: 0 when the run passes, 2 when a selection or stretch check
fails (the report is still written), 1 for bad input.

Reports are JSON with every float written to 17 significant digits, so
two runs with the same flags produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from resinv import __version__
from resinv.errors import SelectionFailed, StretchViolation
from resinv.generators import path_from_json
from resinv.linalg import Subspace, coordinate_subspace
from resinv.paths import MatrixPath, constant_path
from resinv.pipelines import (
    DEFAULT_TARGET,
    factorize_identity,
    method_one,
    method_two,
    structural_check,
    verify_subspace_path,
)
from resinv.segments import ConstantSegment, SubspacePath
from resinv.selection import brute_force_best_subset, select_restricted_invertible

SCHEMA_NAME = "resinv-report"
SCHEMA_VERSION = 1
COMMANDS = ("select", "method1", "method2", "factorize", "verify", "oracle")

log = logging.getLogger("resinv")


# ---------------------------------------------------------------------------
# serialization


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = "%.17g" % x
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed-precision floats; keys keep insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating, bool)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(path: Path, report) -> None:
    lines = ["t,stretch,adj_distance"]
    for t, s, d in zip(report.t, report.stretch, report.adj_distance):
        lines.append(f"{_fmt_float(t)},{_fmt_float(s)},{_fmt_float(d)}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# input handling


def load_input(text: str) -> dict:
    """Inline JSON if it parses as such, otherwise a path to a JSON file."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    return json.loads(Path(text).read_text())


def path_from_input(obj: dict) -> MatrixPath:
    if obj.get("kind") == "matrix":
        return constant_path(np.asarray(obj["matrix"], dtype=float), obj.get("domain", (0, 1)))
    return path_from_json(obj)


def subspace_path_from_input(obj: dict, path: MatrixPath) -> SubspacePath:
    n = path.shape[1]
    a, b = path.domain
    given = obj.get("subspace")
    if given is None:
        U = coordinate_subspace(range(n), n)
    elif "indices" in given:
        U = coordinate_subspace(given["indices"], n)
    elif "basis" in given:
        U = Subspace(np.asarray(given["basis"], dtype=float))
    else:
        raise ValueError("subspace needs 'indices' or 'basis'")
    return SubspacePath([ConstantSegment(U, a, b)])


# ---------------------------------------------------------------------------
# commands


def _verification_block(ver, with_records=True):
    if ver is None:
        return None
    out = ver.summary()
    if with_records:
        out["records"] = ver.records()
    return out


def run_select(args, obj):
    A = path_from_input(obj).eval(path_from_input(obj).domain[0])
    eps = 0.5 if args.epsilon is None else args.epsilon
    res = select_restricted_invertible(
        A, epsilon=eps, mode=args.mode, target_c=args.target_c,
        target_size=args.target_size, rng_seed=args.seed,
    )
    return True, {
        "subset": list(res.subset),
        "size": res.size,
        "certified_bound": res.certified_bound,
        "target_bound": res.target_bound,
        "attempts": res.attempts,
    }, None


def run_oracle(args, obj):
    path = path_from_input(obj)
    A = path.eval(path.domain[0])
    if args.target_size is None:
        raise ValueError("oracle needs --target-size k")
    subset, value = brute_force_best_subset(A, args.target_size)
    return True, {"k": args.target_size, "n": A.shape[1], "subset": list(subset),
                  "value": value}, None


def run_method1(args, obj):
    path = path_from_input(obj)
    rep = method_one(path, gamma=args.gamma, mode=args.mode, target_c=args.target_c,
                     target_size=args.target_size, epsilon=args.epsilon, seed=args.seed,
                     samples=args.samples, verify=False)
    ver = verify_subspace_path(path, rep.output, rep.target, args.samples,
                               {"c0": rep.c0, "d0": rep.d0, "gamma": rep.gamma,
                                "Lambda": rep.Lambda, "epsilon": rep.epsilon})
    result = rep.summary()
    result["segments"] = rep.output.describe()
    return ver.passed, result, ver


def run_method2(args, obj):
    path = path_from_input(obj)
    rep = method_two(path, mode=args.mode, target_c=args.target_c, target_size=args.target_size,
                     epsilon=args.epsilon, seed=args.seed, samples=args.samples, verify=False)
    ver = verify_subspace_path(path, rep.output, rep.c, args.samples,
                               {"c": rep.c, "node_target": rep.node_target,
                                "epsilon": rep.epsilon})
    form, contain = structural_check(rep.output)
    result = rep.summary()
    result["structure_error"] = form
    result["containment_residual"] = contain
    result["segments"] = rep.output.describe()
    return ver.passed and form == 0.0, result, ver


def run_factorize(args, obj):
    path = path_from_input(obj)
    samples = args.samples
    fac = factorize_identity(path, theta=args.theta, gamma=args.gamma, samples=samples,
                             mode=args.mode, target_c=args.target_c,
                             target_size=args.target_size, epsilon=args.epsilon,
                             seed=args.seed)
    result = fac.summary()
    result["method_one"] = fac.method_one.summary()
    ok = fac.residual_max < 1e-8 and fac.norm_product_max <= fac.bound + 1e-6
    return ok, result, fac.method_one.verification


def run_verify(args, obj):
    path = path_from_input(obj)
    U = subspace_path_from_input(obj, path)
    c = 0.0 if args.target_c is None else args.target_c
    ver = verify_subspace_path(path, U, c, args.samples)
    return ver.passed, {"dim": U.dim}, ver


RUNNERS = {
    "select": run_select,
    "oracle": run_oracle,
    "method1": run_method1,
    "method2": run_method2,
    "factorize": run_factorize,
    "verify": run_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="resinv", description=__doc__.splitlines()[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--input", required=True, help="inline JSON or a JSON file")
    p.add_argument("--mode", default="best-effort", choices=("certified", "best-effort"))
    p.add_argument("--target-c", type=float, default=None)
    p.add_argument("--target-size", type=int, default=None)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--epsilon", type=float, default=None,
                   help="selection epsilon for 'select', grid epsilon for path commands")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--output", default="-")
    p.add_argument("--csv", default=None)
    p.add_argument("--wall-time", action="store_true",
                   help="include elapsed seconds (makes output run-dependent)")
    p.add_argument("--log-level", default="WARNING")
    return p


def _config_dict(args) -> dict:
    return {
        "command": args.command,
        "mode": args.mode,
        "target_c": args.target_c,
        "target_size": args.target_size,
        "gamma": args.gamma,
        "theta": args.theta,
        "epsilon": args.epsilon,
        "seed": args.seed,
        "samples": args.samples,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.mode == "best-effort" and args.target_c is None and args.command in (
        "method1", "method2", "factorize"
    ):
        args.target_c = DEFAULT_TARGET
    start = time.perf_counter()
    try:
        obj = load_input(args.input)
        if not isinstance(obj, dict):
            raise ValueError("input must be a JSON object")
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    report = {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "config": _config_dict(args),
        "input": obj,
    }
    ver = None
    try:
        ok, result, ver = RUNNERS[args.command](args, obj)
        report["status"] = "pass" if ok else "fail"
        report["result"] = result
        report["error"] = None
        code = 0 if ok else 2
    except (SelectionFailed, StretchViolation) as exc:
        report["status"] = "fail"
        report["result"] = None
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = 2
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report["verification"] = _verification_block(ver)
    if args.wall_time:
        report["wall_time"] = time.perf_counter() - start

    text = dumps(report) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    if args.csv and ver is not None:
        write_csv(Path(args.csv), ver)
    return code


if __name__ == "__main__":
    sys.exit(main())
