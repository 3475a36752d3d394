"""
Identification of recursive max-linear structure from a coefficient matrix.

A non-negative matrix ``B`` is the coefficient matrix of a recursive
max-linear model on DAG ``D`` iff ``sgn(B)`` is the reachability matrix of
``D`` and ``B = A v B (.) A0`` with ``A = diag(B)`` and
``A0[k, i] = b_ki / b_kk`` on the edges of ``D``. Without a DAG the
condition becomes ``B = B (.) B0`` with ``B0[k, i] = b_ki / b_kk``.

The smallest DAG carrying such a representation keeps an edge ``k -> i``
only when it is the unique max-weighted path from ``k`` to ``i``. Every DAG
between it and the transitive closure works as well, with the extra edges
weighted anywhere in ``(0, b_ki / b_kk]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dag import Dag, dag_from_reachability, is_reachability_matrix
from .exceptions import MatrixValidationError, ModelError
from .model import RecursiveMLModel
from .semiring import (
    DEFAULT_TOLERANCE,
    as_matrix,
    elementwise_max,
    is_exact,
    matrices_close,
    max_times_product,
    zeros,
)

__all__ = [
    "Validation",
    "Interval",
    "WeightSpace",
    "normalized",
    "validate_on_dag",
    "validate_B",
    "closure_fixed_point_holds",
    "minimum_ml_dag_from_model",
    "minimum_ml_dag_from_B",
    "admissible_dags",
    "count_admissible_dags",
    "weight_space",
    "DEFAULT_DAG_CAP",
]

DEFAULT_DAG_CAP = 10**4


@dataclass
class Validation:
    """Verdict of a fixed-point check; truthy when valid.

    Attributes
    ----------
    valid : bool
    reasons : list of str
        Reason codes for an invalid verdict: ``"not_square"``,
        ``"negative_entry"``, ``"zero_diagonal"``, ``"not_reachability"``,
        ``"fixed_point"``.
    violations : list of (j, i, lhs, rhs)
        Entries where ``B`` (``lhs``) differs from the fixed-point
        right-hand side (``rhs``), 1-based.
    """

    valid: bool
    reasons: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.valid

    def to_json(self):
        from .semiring import format_number

        return {
            "valid": self.valid,
            "reasons": list(self.reasons),
            "violations": [
                {"j": j, "i": i, "lhs": format_number(lhs), "rhs": format_number(rhs)}
                for j, i, lhs, rhs in self.violations
            ],
        }


def normalized(B):
    """``B0[k, i] = b_ki / b_kk`` (row ``k`` divided by its diagonal entry)."""
    B = np.asarray(B)
    diag = B.diagonal()
    if is_exact(B):
        out = zeros(B.shape, True)
        for k in range(B.shape[0]):
            for i in range(B.shape[1]):
                out[k, i] = B[k, i] / diag[k]
        return out
    return B / diag[:, None]


def _violations(B, rhs, tol):
    out = []
    d = B.shape[0]
    for j in range(d):
        for i in range(d):
            if not tol.close(B[j, i], rhs[j, i]):
                out.append((j + 1, i + 1, B[j, i], rhs[j, i]))
    return out


def validate_on_dag(B, D, tol=DEFAULT_TOLERANCE):
    """Check ``B = A v B (.) A0`` for the given DAG.

    Raises
    ------
    ValueError
        If ``B`` has a zero diagonal entry or ``sgn(B)`` differs from the
        reachability matrix of ``D`` (a precondition, not a verdict).
    """
    B = as_matrix(B, is_exact(np.asarray(B)) or None, "B")
    if B.shape != (D.d, D.d):
        raise ValueError(f"B has shape {B.shape}, DAG has {D.d} nodes")
    if not all(x > 0 for x in B.diagonal()):
        raise ValueError("B has a zero diagonal entry")
    if not np.array_equal(B > 0, D.reachability):
        raise ValueError("sgn(B) is not the reachability matrix of the DAG")
    exact = is_exact(B)
    A = zeros(B.shape, exact)
    A0 = zeros(B.shape, exact)
    for k in range(D.d):
        A[k, k] = B[k, k]
    for k, i in D.edges:
        A0[k - 1, i - 1] = B[k - 1, i - 1] / B[k - 1, k - 1]
    rhs = elementwise_max(A, max_times_product(B, A0))
    viol = _violations(B, rhs, tol)
    return Validation(not viol, ["fixed_point"] if viol else [], viol)


def validate_B(B, tol=DEFAULT_TOLERANCE):
    """Check whether ``B`` is the coefficient matrix of some recursive max-linear model.

    Requires ``sgn(B)`` to be a DAG reachability matrix and ``B = B (.) B0``.
    Never raises on bad input; the reasons are reported instead.
    """
    arr = np.asarray(B)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        return Validation(False, ["not_square"])
    try:
        B = as_matrix(arr, is_exact(arr) or None, "B")
    except (ValueError, TypeError):
        return Validation(False, ["negative_entry"])
    if not all(x > 0 for x in B.diagonal()):
        return Validation(False, ["zero_diagonal"])
    if not is_reachability_matrix(B):
        return Validation(False, ["not_reachability"])
    rhs = max_times_product(B, normalized(B))
    viol = _violations(B, rhs, tol)
    return Validation(not viol, ["fixed_point"] if viol else [], viol)


def closure_fixed_point_holds(B, tol=DEFAULT_TOLERANCE):
    """``B = A v B (.) (B0 - id)``, the transitive-closure form of ``B = B (.) B0``."""
    B = np.asarray(B)
    exact = is_exact(B)
    d = B.shape[0]
    A = zeros(B.shape, exact)
    A0tc = normalized(B).copy()
    for k in range(d):
        A[k, k] = B[k, k]
        A0tc[k, k] = A0tc[k, k] - 1
    return matrices_close(B, elementwise_max(A, max_times_product(B, A0tc)), tol)


def _bypass(B, k, i, via):
    best = 0
    for l in via:
        if l in (k, i):
            continue
        bkl, bli = B[k - 1, l - 1], B[l - 1, i - 1]
        if bkl > 0 and bli > 0:
            v = bkl * bli / B[l - 1, l - 1]
            if v > best:
                best = v
    return best


def minimum_ml_dag_from_model(model, B, tol=DEFAULT_TOLERANCE):
    """Minimum max-linear DAG, keeping model edges that are unique max-weighted paths.

    Edge ``k -> i`` survives iff ``b_ki > max_{l in de(k) & pa(i)} b_kl b_li / b_ll``.

    Raises
    ------
    ModelError
        If ``B`` does not belong to a recursive max-linear model on ``model.dag``.
    """
    B = np.asarray(B)
    try:
        verdict = validate_on_dag(B, model.dag, tol)
    except ValueError as exc:
        raise ModelError(f"B is inconsistent with the model: {exc}") from exc
    if not verdict:
        raise ModelError("B is inconsistent with the model: fixed point equation fails")
    dag = model.dag
    kept = []
    for k, i in dag.sorted_edges:
        via = dag.descendants(k) & dag.parents(i)
        if tol.greater(B[k - 1, i - 1], _bypass(B, k, i, via)):
            kept.append((k, i))
    return Dag(dag.d, kept)


def _check_valid(B, tol):
    verdict = validate_B(B, tol)
    if not verdict:
        raise MatrixValidationError(
            "matrix is not a max-linear coefficient matrix: " + ", ".join(verdict.reasons), verdict.reasons
        )
    arr = np.asarray(B)
    return as_matrix(arr, is_exact(arr) or None, "B")


def minimum_ml_dag_from_B(B, tol=DEFAULT_TOLERANCE):
    """Minimum max-linear DAG identified from ``B`` alone.

    Edge ``k -> i`` iff ``k != i`` and ``b_ki > max_{l != i, k} b_kl b_li / b_ll``.

    Raises
    ------
    MatrixValidationError
        If ``B`` fails :func:`validate_B`.
    """
    B = _check_valid(B, tol)
    d = B.shape[0]
    nodes = range(1, d + 1)
    edges = [
        (k, i)
        for k in nodes
        for i in nodes
        if k != i and B[k - 1, i - 1] > 0 and tol.greater(B[k - 1, i - 1], _bypass(B, k, i, nodes))
    ]
    return Dag(d, edges)


def _optional_edges(B, tol):
    base = minimum_ml_dag_from_B(B, tol)
    closure = dag_from_reachability(np.asarray(B))
    return base, sorted(closure.edges - base.edges)


def admissible_dags(B, cap=DEFAULT_DAG_CAP, tol=DEFAULT_TOLERANCE):
    """Yield every DAG representing ``B``, fewest added edges first.

    The DAGs are exactly those containing the minimum max-linear DAG and
    contained in its transitive closure. Within a size class, subsets of
    optional edges come in lexicographic order. At most ``cap`` DAGs are
    produced.

    Raises
    ------
    MatrixValidationError
        If ``B`` fails :func:`validate_B` (raised on first iteration).
    """
    base, optional = _optional_edges(B, tol)
    emitted = 0
    for size in range(len(optional) + 1):
        for extra in itertools.combinations(optional, size):
            if emitted >= cap:
                return
            yield Dag(base.d, base.edges | set(extra))
            emitted += 1


def count_admissible_dags(B, tol=DEFAULT_TOLERANCE):
    """Number of DAGs representing ``B`` (a power of two)."""
    _, optional = _optional_edges(B, tol)
    return 2 ** len(optional)


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``(lower, upper]``."""

    lower: object
    upper: object

    def __contains__(self, x):
        return self.lower < x <= self.upper

    def __str__(self):
        from .semiring import format_number

        return f"({format_number(self.lower)}, {format_number(self.upper)}]"


@dataclass(frozen=True)
class WeightSpace:
    """All weights under which a given DAG represents ``B``.

    Attributes
    ----------
    dag : Dag
    noise : tuple
        ``c_ii = b_ii``.
    fixed : dict
        ``(k, i) -> b_ki / b_kk`` for edges of the minimum max-linear DAG.
    free : dict
        ``(k, i) -> Interval(0, b_ki / b_kk)`` for the remaining edges.
    """

    dag: Dag
    noise: tuple
    fixed: dict
    free: dict
    exact: bool = False

    def canonical(self):
        """Model using the upper end point of every free interval."""
        weights = dict(self.fixed)
        weights.update({e: iv.upper for e, iv in self.free.items()})
        return RecursiveMLModel(self.dag, weights, self.noise, exact=self.exact)

    def model(self, free_weights):
        """Model with the given weights for the free edges.

        Raises
        ------
        ValueError
            If a free edge is missing or a weight lies outside its interval.
        """
        free_weights = dict(free_weights)
        if set(free_weights) != set(self.free):
            raise ValueError("a weight is required for every free edge and only those")
        for e, w in free_weights.items():
            if w not in self.free[e]:
                raise ValueError(f"weight for edge {e} outside {self.free[e]}")
        weights = dict(self.fixed)
        weights.update(free_weights)
        return RecursiveMLModel(self.dag, weights, self.noise, exact=self.exact)


def weight_space(B, D, tol=DEFAULT_TOLERANCE):
    """Admissible weights for representing ``B`` on DAG ``D``.

    Raises
    ------
    MatrixValidationError
        If ``B`` is invalid.
    ValueError
        If ``D`` is not admissible for ``B``.
    """
    B = _check_valid(B, tol)
    base = minimum_ml_dag_from_B(B, tol)
    if D.d != base.d or not base.edges <= D.edges or not np.array_equal(D.reachability, B > 0):
        raise ValueError("DAG is not admissible for B")
    exact = is_exact(B)
    zero = B[0, 0] * 0
    noise = tuple(B[i, i] for i in range(D.d))
    fixed, free = {}, {}
    for k, i in D.sorted_edges:
        c = B[k - 1, i - 1] / B[k - 1, k - 1]
        if (k, i) in base.edges:
            fixed[(k, i)] = c
        else:
            free[(k, i)] = Interval(zero, c)
    return WeightSpace(D, noise, fixed, free, exact)
