"""
Command-line interface: ``maxlin <command> ...``.

Exit codes: 0 ok or valid, 1 invalid verdict, 2 input error, 3 graph error
(cycle), 4 matrix-validation error. Matrix inputs are CSV (by ``.csv``
suffix) or JSON (a list of rows, or ``{"B": rows}``); a model JSON file is
accepted wherever a matrix is, and is converted with ``compute_B`` first.
The environment variable ``MAXLIN_RTOL`` overrides the relative tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from numbers import Rational

import numpy as np

from .dag import Dag, to_dot
from .exceptions import CycleError, MatrixValidationError, ModelError
from .inference import bounds, minimal_representation
from .model import RecursiveMLModel, compute_B
from .paths import max_weighted_polytree
from .semiring import Tolerance, format_number, matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json, to_number
from .simulation import DISTRIBUTIONS, NoiseSpec, simulate
from .structure import minimum_ml_dag_from_B, minimum_ml_dag_from_model, normalized, validate_B, validate_on_dag

__all__ = ["main", "parse_node_set"]

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_GRAPH, EXIT_MATRIX = 0, 1, 2, 3, 4


class InputError(Exception):
    """Bad file, flag value or schema; maps to exit code 2."""


def parse_node_set(text):
    """``"1,2,5-7"`` -> ``[1, 2, 5, 6, 7]``; the empty string is the empty set."""
    out = set()
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                a, b = int(lo), int(hi)
                if a > b:
                    raise ValueError
                out.update(range(a, b + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad node set element {part!r}") from None
    return sorted(out)


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_model(path, exact):
    obj = _json(path)
    if not isinstance(obj, dict) or "noise" not in obj:
        raise InputError(f"{path} is not a model file")
    return RecursiveMLModel.from_json(obj, exact=exact)


def _load_input(path, exact, raw=False):
    """Matrix or model from ``path``; returns ``(B, model_or_None)``.

    With ``raw`` the matrix entries are parsed but not checked, so that
    negative entries reach the validator instead of failing the parse.
    """
    text = _read(path)
    if path.endswith(".csv"):
        return _matrix(lambda: matrix_from_csv(text, exact), text, exact, raw, csv_text=True), None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(obj, dict) and "noise" in obj:
        model = RecursiveMLModel.from_json(obj, exact=exact)
        return compute_B(model), model
    if isinstance(obj, dict) and "B" in obj:
        obj = obj["B"]
    return _matrix(lambda: matrix_from_json(obj, exact), obj, exact, raw), None


def _matrix(parse, data, exact, raw, csv_text=False):
    if not raw:
        return parse()
    if csv_text:
        data = [r for r in csv.reader(io.StringIO(data)) if r and any(c.strip() for c in r)]
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputError("matrix must be a non-empty list of rows")
    if len({len(r) for r in data}) != 1:
        raise InputError("ragged matrix")
    rows = [[to_number(x, exact) for x in r] for r in data]
    return np.array(rows, dtype=object if exact else float)


def _encode(x):
    """JSON scalar: ints and floats as numbers, fractions as ``"p/q"``, infinity as ``"inf"``."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return format_number(x)
    x = float(x)
    return format_number(x) if math.isinf(x) else x


def _emit(args, text):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _node(value, d, name="--node"):
    if not 1 <= value <= d:
        raise InputError(f"{name} {value} outside 1..{d}")
    return value


def _nodes(values, d):
    for v in values:
        _node(v, d, "--given element")
    return values


def _dag_weights(dag, B):
    B0 = normalized(B)
    return {(k, i): B0[k - 1, i - 1] for k, i in dag.sorted_edges}


def cmd_compute_b(args, tol):
    model = _load_model(args.model, args.rational)
    B = compute_B(model)
    if args.format == "json":
        _emit(args, json.dumps(matrix_to_json(B)))
    else:
        _emit(args, matrix_to_csv(B))
    return EXIT_OK


def cmd_min_dag(args, tol):
    B, model = _load_input(args.input, args.rational)
    dag = minimum_ml_dag_from_model(model, B, tol) if model is not None else minimum_ml_dag_from_B(B, tol)
    weights = _dag_weights(dag, B)
    if args.json:
        out = {
            "d": dag.d,
            "edges": [{"from": k, "to": i, "weight": _encode(weights[(k, i)])} for k, i in dag.sorted_edges],
        }
        _emit(args, json.dumps(out))
    else:
        _emit(args, to_dot(dag, weights, name="minimum_ml_dag"))
    return EXIT_OK


def cmd_validate(args, tol):
    B, _ = _load_input(args.input, args.rational, raw=True)
    if args.dag:
        obj = _json(args.dag)
        try:
            D = Dag.from_json(obj)
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad DAG file: {exc}") from exc
        try:
            verdict = validate_on_dag(B, D, tol)
        except CycleError:
            raise
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        verdict = validate_B(B, tol)
    if args.json:
        _emit(args, json.dumps(verdict.to_json()))
    else:
        _emit(args, "valid" if verdict else "invalid: " + ", ".join(verdict.reasons))
    return EXIT_OK if verdict else EXIT_INVALID


def _valid_matrix(args, tol):
    B, model = _load_input(args.input, args.rational)
    if model is None:
        minimum_ml_dag_from_B(B, tol)  # raises MatrixValidationError
    return B


def cmd_represent(args, tol):
    B = _valid_matrix(args, tol)
    d = B.shape[0]
    rep = minimal_representation(B, _node(args.node, d), _nodes(args.given, d), tol)
    _emit(args, json.dumps(rep.to_json()))
    return EXIT_OK


def _load_values(path, exact):
    obj = _json(path)
    if not isinstance(obj, dict):
        raise InputError("values file must be a JSON object mapping node to value")
    out = {}
    for k, v in obj.items():
        try:
            node = int(k)
            val = to_number(v, exact)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad observation {k!r}: {v!r}") from exc
        if val != val or val < 0:
            raise InputError(f"observation for node {node} must be non-negative")
        out[node] = val
    return out


def cmd_bounds(args, tol):
    B = _valid_matrix(args, tol)
    d = B.shape[0]
    i, U = _node(args.node, d), _nodes(args.given, d)
    values = _load_values(args.values, args.rational) if args.values else {}
    missing = sorted(set(U) - set(values))
    if missing:
        raise InputError(f"no observation for nodes {missing}")
    lower, upper = bounds(B, i, U, {u: values[u] for u in U}, tol)
    _emit(args, json.dumps({"lower": _encode(lower), "upper": _encode(upper)}))
    return EXIT_OK


def cmd_polytree(args, tol):
    model = _load_model(args.model, args.rational)
    _node(args.node, model.d)
    tree = max_weighted_polytree(model, compute_B(model), args.node, tol)
    weights = {e: model.edge_weights[e] for e in tree.sorted_edges}
    if args.json:
        out = {
            "d": tree.d,
            "edges": [{"from": k, "to": i, "weight": _encode(w)} for (k, i), w in sorted(weights.items())],
        }
        _emit(args, json.dumps(out))
    else:
        _emit(args, to_dot(tree, weights, name="polytree"))
    return EXIT_OK


def cmd_simulate(args, tol):
    model = _load_model(args.model, args.rational)
    if args.n < 0:
        raise InputError("--n must be non-negative")
    try:
        spec = NoiseSpec(args.dist, alpha=args.alpha, rate=args.rate, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    batch = simulate(model, spec, args.n)
    _emit(args, batch.to_csv())
    if args.metadata:
        try:
            with open(args.metadata, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(batch.metadata(), sort_keys=True) + "\n")
        except OSError as exc:
            raise InputError(f"cannot write {args.metadata}: {exc.strerror}") from exc
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rational", action="store_true", help="exact rational arithmetic")
    common.add_argument("--out", help="write the result to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="maxlin", description="Recursive max-linear models on DAGs.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("compute-b", parents=[common], help="coefficient matrix B of a model")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_compute_b)

    p = sub.add_parser("min-dag", parents=[common], help="minimum max-linear DAG as DOT")
    p.add_argument("input", help="B (CSV/JSON) or model JSON file")
    p.add_argument("--json", action="store_true", help="JSON edge list instead of DOT")
    p.set_defaults(func=cmd_min_dag)

    p = sub.add_parser("validate", parents=[common], help="is B a max-linear coefficient matrix")
    p.add_argument("input", help="B (CSV/JSON) or model JSON file")
    p.add_argument("--dag", help="check the fixed point on this DAG (JSON)")
    p.add_argument("--json", action="store_true", help="JSON diagnostics")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("represent", parents=[common], help="minimal representation of X_i given X_U")
    p.add_argument("input", help="B (CSV/JSON) or model JSON file")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--given", type=parse_node_set, default=[], help="node set, e.g. 1,2,5-7")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("bounds", parents=[common], help="bounds on X_i given observed X_U")
    p.add_argument("input", help="B (CSV/JSON) or model JSON file")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--given", type=parse_node_set, default=[], help="node set, e.g. 1,2,5-7")
    p.add_argument("--values", help='JSON object of observations, e.g. {"2": 2.0}')
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("polytree", parents=[common], help="polytree of max-weighted paths into a node")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--json", action="store_true", help="JSON edge list instead of DOT")
    p.set_defaults(func=cmd_polytree)

    p = sub.add_parser("simulate", parents=[common], help="sample noise and observations as CSV")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="frechet")
    p.add_argument("--alpha", type=float, default=1.0, help="Frechet shape")
    p.add_argument("--rate", type=float, default=1.0, help="exponential rate")
    p.add_argument("--metadata", help="write run metadata JSON to this file")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance.from_env()
        return args.func(args, tol)
    except CycleError as exc:
        code, msg = EXIT_GRAPH, str(exc)
    except MatrixValidationError as exc:
        code, msg = EXIT_MATRIX, str(exc)
    except (InputError, ModelError, ValueError, ZeroDivisionError) as exc:
        code, msg = EXIT_INPUT, str(exc)
    print(f"maxlin: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
