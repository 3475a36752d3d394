"""
Recursive max-linear models and their max-linear coefficient matrix.

A recursive max-linear model on a DAG sets, in topological order,
``X_i = max(max_{k in pa(i)} c_ki * X_k, c_ii * Z_i)`` with positive edge
weights ``c_ki`` and positive noise weights ``c_ii``. Every such ``X`` is
max-linear in the noise, ``X_i = max_j b_ji * Z_j``, where ``b_ji`` is the
largest weight of a path from ``j`` to ``i``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .dag import Dag
from .exceptions import ModelError, PathLimitError
from .semiring import (
    as_matrix,
    as_vector,
    elementwise_max,
    format_number,
    from_log,
    is_exact,
    max_plus_product,
    max_times_power,
    max_times_product,
    to_log,
    to_number,
    zeros,
)

__all__ = [
    "RecursiveMLModel",
    "path_weight",
    "compute_B",
    "compute_log_B",
    "compute_B_oracle",
    "max_weight_by_length",
    "eval_max_linear",
    "DEFAULT_PATH_CAP",
]

DEFAULT_PATH_CAP = 10**6


@dataclass(frozen=True, eq=False)
class RecursiveMLModel:
    """A DAG with positive edge weights and positive noise weights.

    Parameters
    ----------
    dag : Dag
    edge_weights : mapping (k, i) -> number
        Exactly one positive weight per edge of ``dag``.
    noise_weights : sequence of number
        ``c_11, ..., c_dd``, all positive.
    exact : bool
        Store weights as ``Fraction`` (exact mode) instead of floats.
    """

    dag: Dag
    edge_weights: dict
    noise_weights: tuple
    exact: bool = False

    def __init__(self, dag, edge_weights, noise_weights, exact=False):
        if not isinstance(dag, Dag):
            raise TypeError("dag must be a Dag")
        edge_weights = dict(edge_weights)
        extra = set(edge_weights) - dag.edges
        if extra:
            k, i = sorted(extra)[0]
            raise ModelError(f"weight given for non-edge ({k}, {i})")
        missing = dag.edges - set(edge_weights)
        if missing:
            k, i = sorted(missing)[0]
            raise ModelError(f"edge ({k}, {i}) has no weight")
        weights = {}
        for (k, i), c in sorted(edge_weights.items()):
            c = _number(c, exact, f"edge ({k}, {i})")
            if not c > 0:
                raise ModelError(f"edge ({k}, {i}) has non-positive weight {format_number(c)}")
            weights[(k, i)] = c
        noise_weights = list(noise_weights)
        if len(noise_weights) != dag.d:
            raise ModelError(f"expected {dag.d} noise weights, got {len(noise_weights)}")
        noise = []
        for idx, c in enumerate(noise_weights, start=1):
            c = _number(c, exact, f"noise weight of node {idx}")
            if not c > 0:
                raise ModelError(f"noise weight of node {idx} is non-positive: {format_number(c)}")
            noise.append(c)
        object.__setattr__(self, "dag", dag)
        object.__setattr__(self, "edge_weights", weights)
        object.__setattr__(self, "noise_weights", tuple(noise))
        object.__setattr__(self, "exact", bool(exact))

    def __eq__(self, other):
        if not isinstance(other, RecursiveMLModel):
            return NotImplemented
        return (
            self.dag == other.dag
            and self.edge_weights == other.edge_weights
            and self.noise_weights == other.noise_weights
        )

    __hash__ = None

    def __repr__(self):
        return f"RecursiveMLModel(d={self.d}, edges={len(self.dag.edges)}, exact={self.exact})"

    @property
    def d(self):
        return self.dag.d

    def weight(self, k, i):
        """``c_ki``; ``c_ii`` for ``k == i``; zero for a non-edge."""
        if k == i:
            return self.noise_weights[i - 1]
        return self.edge_weights.get((k, i), Fraction(0) if self.exact else 0.0)

    def as_exact(self):
        if self.exact:
            return self
        return RecursiveMLModel(self.dag, self.edge_weights, self.noise_weights, exact=True)

    def as_float(self):
        return RecursiveMLModel(
            self.dag,
            {e: float(c) for e, c in self.edge_weights.items()},
            [float(c) for c in self.noise_weights],
            exact=False,
        )

    @cached_property
    def noise_matrix(self):
        """``A = diag(c_11, ..., c_dd)``."""
        A = zeros((self.d, self.d), self.exact)
        for i, c in enumerate(self.noise_weights):
            A[i, i] = c
        return A

    @cached_property
    def adjacency(self):
        """Weighted adjacency ``A0[k-1, i-1] = c_ki`` for edges ``k -> i``."""
        A0 = zeros((self.d, self.d), self.exact)
        for (k, i), c in self.edge_weights.items():
            A0[k - 1, i - 1] = c
        return A0

    @cached_property
    def scaled_adjacency(self):
        """``A1[k-1, i-1] = c_kk * c_ki`` for edges ``k -> i`` (single-edge path weights)."""
        A1 = zeros((self.d, self.d), self.exact)
        for (k, i), c in self.edge_weights.items():
            A1[k - 1, i - 1] = self.noise_weights[k - 1] * c
        return A1

    def to_json(self):
        """Serialize to the model JSON schema; exact weights become ``"p/q"`` strings."""
        enc = format_number if self.exact else float
        return {
            "d": self.d,
            "edges": [
                {"from": k, "to": i, "weight": enc(c)} for (k, i), c in sorted(self.edge_weights.items())
            ],
            "noise": [enc(c) for c in self.noise_weights],
        }

    @classmethod
    def from_json(cls, obj, exact=False):
        """Build a model from ``{"d", "edges": [{"from", "to", "weight"}], "noise"}``.

        Raises
        ------
        ModelError
            On schema violations and non-positive weights.
        CycleError
            If the edges contain a cycle.
        """
        if not isinstance(obj, dict):
            raise ModelError("model JSON must be an object")
        for key in ("d", "edges", "noise"):
            if key not in obj:
                raise ModelError(f"model JSON lacks field {key!r}")
        d = obj["d"]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise ModelError(f"'d' must be a positive integer, got {d!r}")
        if not isinstance(obj["edges"], list) or not isinstance(obj["noise"], list):
            raise ModelError("'edges' and 'noise' must be lists")
        pairs, weights = [], {}
        for e in obj["edges"]:
            if not isinstance(e, dict) or not {"from", "to", "weight"} <= set(e):
                raise ModelError(f"edge entry {e!r} needs 'from', 'to' and 'weight'")
            k, i = e["from"], e["to"]
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (k, i)):
                raise ModelError(f"edge endpoints must be integers, got {e!r}")
            pairs.append((k, i))
            weights[(k, i)] = e["weight"]
        try:
            dag = Dag(d, pairs)
        except ValueError as exc:
            if type(exc) is ValueError:
                raise ModelError(str(exc)) from exc
            raise
        return cls(dag, weights, obj["noise"], exact=exact)

    def fingerprint(self):
        """SHA-256 of the canonical JSON form; stable across runs."""
        blob = json.dumps(self.as_exact().to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _number(c, exact, what):
    try:
        return to_number(c, exact=exact)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"{what}: invalid weight {c!r}") from exc


def _check_path(model, path):
    path = [int(v) for v in path]
    if len(path) < 2:
        raise ValueError("a path needs at least one edge")
    if len(set(path)) != len(path):
        raise ValueError(f"path {path} repeats a node")
    for a, b in zip(path, path[1:]):
        if (a, b) not in model.dag.edges:
            raise ValueError(f"path {path} uses non-edge ({a}, {b})")
    return path


def path_weight(model, path):
    """Weight of a path: noise weight of its source times its edge weights.

    Raises
    ------
    ValueError
        If ``path`` is not a directed path of ``model.dag``.
    """
    path = _check_path(model, path)
    w = model.noise_weights[path[0] - 1]
    for a, b in zip(path, path[1:]):
        w = w * model.edge_weights[(a, b)]
    return w


def compute_B(model, log_domain=False):
    """Max-linear coefficient matrix ``B`` of a recursive max-linear model.

    ``B = A v max_{k=0..d-2} A1 (.) A0^k`` where ``(.)`` is the max-times
    product, accumulated with a running power and stopped early once the
    power vanishes. ``B[j-1, i-1]`` is the largest path weight from ``j`` to
    ``i`` (``c_ii`` on the diagonal, zero if ``i`` is not reachable).

    Parameters
    ----------
    log_domain : bool
        Evaluate with max-plus sums of logarithms and exponentiate at the end.
        Floating mode only.
    """
    if log_domain:
        if model.exact:
            raise ValueError("log-domain evaluation is floating mode only")
        return from_log(compute_log_B(model))
    B = model.noise_matrix.copy()
    term = model.scaled_adjacency
    A0 = model.adjacency
    for _ in range(max(model.d - 1, 0)):
        if not term.any():
            break
        B = elementwise_max(B, term)
        term = max_times_product(term, A0)
    return B


def compute_log_B(model):
    """Entrywise natural log of ``B``; ``-inf`` marks zero entries."""
    if model.exact:
        raise ValueError("log-domain evaluation is floating mode only")
    L = to_log(model.noise_matrix)
    term = to_log(model.scaled_adjacency)
    L0 = to_log(model.adjacency)
    for _ in range(max(model.d - 1, 0)):
        if np.isneginf(term).all():
            break
        L = np.maximum(L, term)
        term = max_plus_product(term, L0)
    return L


def max_weight_by_length(model, n):
    """``A1 (.) A0^(n-1)``: largest weight over paths of exactly ``n`` edges."""
    if int(n) != n or n < 1:
        raise ValueError("path length must be a positive integer")
    return max_times_product(model.scaled_adjacency, max_times_power(model.adjacency, int(n) - 1))


def iter_paths(dag, j, i):
    """All directed paths from ``j`` to ``i`` (``j != i``), as node lists."""
    if not dag.has_path(j, i) or j == i:
        return
    stack = [(j, [j])]
    while stack:
        node, path = stack.pop()
        for nxt in sorted(dag.children(node), reverse=True):
            if nxt == i:
                yield path + [i]
            elif dag.has_path(nxt, i):
                stack.append((nxt, path + [nxt]))


def compute_B_oracle(model, max_paths=DEFAULT_PATH_CAP):
    """Reference ``B`` by explicit enumeration of every path.

    Exponential in general; intended for small models only.

    Raises
    ------
    PathLimitError
        When more than ``max_paths`` paths would be enumerated.
    """
    d = model.d
    B = zeros((d, d), model.exact)
    count = 0
    for i in range(1, d + 1):
        B[i - 1, i - 1] = model.noise_weights[i - 1]
        for j in range(1, d + 1):
            for p in iter_paths(model.dag, j, i):
                count += 1
                if count > max_paths:
                    raise PathLimitError(f"more than {max_paths} paths; raise max_paths to continue")
                w = path_weight(model, p)
                if w > B[j - 1, i - 1]:
                    B[j - 1, i - 1] = w
    return B


def eval_max_linear(B, Z):
    """``X = Z (.) B``: ``X_i = max_j b_ji * Z_j``.

    ``Z`` may be a length-``d`` vector or an ``n x d`` batch of row vectors.
    """
    exact = is_exact(np.asarray(B)) or is_exact(np.asarray(Z))
    B = as_matrix(B, exact, "B")
    Zarr = np.asarray(Z, dtype=object if exact else None)
    if Zarr.ndim == 1:
        z = as_vector(Zarr, exact, "Z")
        if z.shape[0] != B.shape[0]:
            raise ValueError(f"Z has length {z.shape[0]}, expected {B.shape[0]}")
        return max_times_product(z[None, :], B)[0]
    Zm = as_matrix(Zarr, exact, "Z")
    if Zm.shape[1] != B.shape[0]:
        raise ValueError(f"Z has {Zm.shape[1]} columns, expected {B.shape[0]}")
    if Zm.shape[0] == 0:
        return zeros((0, B.shape[1]), exact)
    return max_times_product(Zm, B)
