"""
Information about one component from an observed set of components.

Given the coefficient matrix ``B``, a node ``i`` and observed nodes ``U``:

* ``X_i`` is bounded below by ``(b_ji / b_jj) X_j`` for ancestors ``j`` in
  ``U`` and above by ``(b_ii / b_il) X_l`` for descendants ``l`` in ``U``;
  only the lowest max-weighted ancestors and highest max-weighted
  descendants in ``U`` matter;
* ``X_i`` has a unique shortest max-linear representation in terms of
  ``X_U`` and noise variables.

Observed values are not checked for joint attainability under ``B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Rational

import numpy as np

from .semiring import DEFAULT_TOLERANCE, format_number
from .structure import minimum_ml_dag_from_B

__all__ = [
    "an_low",
    "de_high",
    "bounds",
    "raw_bounds",
    "nmw_ancestors",
    "Representation",
    "minimal_representation",
    "parent_representation",
]


def _prepare(B, i, U):
    B = np.asarray(B)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"B must be square, got shape {B.shape}")
    d = B.shape[0]
    nodes = set()
    for v in [i, *U]:
        if isinstance(v, bool) or int(v) != v or not 1 <= v <= d:
            raise ValueError(f"node {v!r} outside 1..{d}")
        nodes.add(int(v))
    return B, int(i), frozenset(int(u) for u in U)


def _anc(B, i):
    return {int(j) + 1 for j in np.flatnonzero(B[:, i - 1] > 0) if j + 1 != i}


def _desc(B, i):
    return {int(l) + 1 for l in np.flatnonzero(B[i - 1] > 0) if l + 1 != i}


def _route(B, j, i, ks):
    """``max_{k in ks} b_jk b_ki / b_kk`` over ``k`` between ``j`` and ``i``; zero if none."""
    best = 0
    for k in ks:
        bjk, bki = B[j - 1, k - 1], B[k - 1, i - 1]
        if bjk > 0 and bki > 0:
            v = bjk * bki / B[k - 1, k - 1]
            if v > best:
                best = v
    return best


def an_low(B, i, U, tol=DEFAULT_TOLERANCE):
    """Lowest max-weighted ancestors of ``i`` in ``U``.

    ``{i}`` if ``i`` is in ``U``; otherwise the ancestors ``j`` in ``U`` such
    that no max-weighted path from ``j`` to ``i`` meets another node of ``U``.
    """
    B, i, U = _prepare(B, i, U)
    if i in U:
        return frozenset({i})
    anc = _anc(B, i)
    out = set()
    for j in anc & U:
        ks = _desc(B, j) & U & anc
        if tol.greater(B[j - 1, i - 1], _route(B, j, i, ks)):
            out.add(j)
    return frozenset(out)


def de_high(B, i, U, tol=DEFAULT_TOLERANCE):
    """Highest max-weighted descendants of ``i`` in ``U`` (dual of :func:`an_low`)."""
    B, i, U = _prepare(B, i, U)
    if i in U:
        return frozenset({i})
    desc = _desc(B, i)
    out = set()
    for l in desc & U:
        ks = desc & U & _anc(B, l)
        if tol.greater(B[i - 1, l - 1], _route(B, i, l, ks)):
            out.add(l)
    return frozenset(out)


def _observed(x_U, U):
    x = {}
    for k, v in dict(x_U).items():
        k = int(k)
        if v < 0:
            raise ValueError(f"observation for node {k} is negative")
        x[k] = v
    missing = set(U) - set(x)
    if missing:
        raise ValueError(f"no observation for nodes {sorted(missing)}")
    return x


def _lower_upper(B, i, lows, highs, x):
    lower = 0
    for j in lows:
        v = B[j - 1, i - 1] / B[j - 1, j - 1] * x[j]
        if v > lower:
            lower = v
    upper = math.inf
    for l in highs:
        v = B[i - 1, i - 1] / B[i - 1, l - 1] * x[l]
        if v < upper:
            upper = v
    return lower, upper


def bounds(B, i, U, x_U, tol=DEFAULT_TOLERANCE):
    """Tight lower and upper bound of ``X_i`` given ``X_U = x_U``.

    Parameters
    ----------
    x_U : mapping node -> observed value
        Must cover every node of ``U``.

    Returns
    -------
    (lower, upper)
        ``upper`` is ``math.inf`` when ``U`` holds no descendant of ``i``.

    Raises
    ------
    ValueError
        On a negative or missing observation.
    """
    B, i, U = _prepare(B, i, U)
    x = _observed(x_U, U)
    if i in U:
        return x[i], x[i]
    return _lower_upper(B, i, an_low(B, i, U, tol), de_high(B, i, U, tol), x)


def raw_bounds(B, i, U, x_U):
    """The same bounds taken over all of ``An(i) & U`` and ``De(i) & U``."""
    B, i, U = _prepare(B, i, U)
    x = _observed(x_U, U)
    lows = (_anc(B, i) | {i}) & U
    highs = (_desc(B, i) | {i}) & U
    return _lower_upper(B, i, lows, highs, x)


def nmw_ancestors(B, i, U, tol=DEFAULT_TOLERANCE):
    """Ancestors of ``i`` none of whose max-weighted paths to ``i`` meets ``U``."""
    B, i, U = _prepare(B, i, U)
    anc = _anc(B, i)
    Anc = anc | {i}
    out = set()
    for j in anc:
        ks = (_desc(B, j) | {j}) & U & Anc
        if tol.greater(B[j - 1, i - 1], _route(B, j, i, ks)):
            out.add(j)
    return frozenset(out)


@dataclass
class Representation:
    """``X_i = max(max_k node_terms[k] * X_k, max_j noise_terms[j] * Z_j)``."""

    node: int
    node_terms: dict = field(default_factory=dict)
    noise_terms: dict = field(default_factory=dict)

    def evaluate(self, x, z):
        """Value of the representation from full vectors ``x`` and ``z`` (0-based arrays)."""
        best = 0
        for k, c in self.node_terms.items():
            v = c * x[k - 1]
            if v > best:
                best = v
        for j, c in self.noise_terms.items():
            v = c * z[j - 1]
            if v > best:
                best = v
        return best

    def evaluate_batch(self, X, Z):
        """Row-wise evaluation for ``n x d`` float arrays."""
        X, Z = np.asarray(X, dtype=float), np.asarray(Z, dtype=float)
        out = np.zeros(X.shape[0])
        for k, c in self.node_terms.items():
            np.maximum(out, float(c) * X[:, k - 1], out=out)
        for j, c in self.noise_terms.items():
            np.maximum(out, float(c) * Z[:, j - 1], out=out)
        return out

    def without(self, kind, node):
        """Copy with one term removed; ``kind`` is ``"node"`` or ``"noise"``."""
        nt, zt = dict(self.node_terms), dict(self.noise_terms)
        (nt if kind == "node" else zt).pop(node)
        return Representation(self.node, nt, zt)

    def to_json(self):
        """Exact coefficients become ``"p/q"`` strings, floats stay numbers."""

        def conv(c):
            return format_number(c) if isinstance(c, Rational) else float(c)

        return {
            "node_terms": {str(k): conv(c) for k, c in sorted(self.node_terms.items())},
            "noise_terms": {str(j): conv(c) for j, c in sorted(self.noise_terms.items())},
        }


def minimal_representation(B, i, U, tol=DEFAULT_TOLERANCE):
    """Shortest max-linear representation of ``X_i`` through ``X_U`` and noise.

    Node terms run over the lowest max-weighted ancestors ``k`` of ``i`` in
    ``U`` with coefficient ``b_ki / b_kk``; noise terms over
    ``(nmw_ancestors | {i}) - U`` with coefficient ``b_ji``.
    """
    B, i, U = _prepare(B, i, U)
    if i in U:
        one = B[i - 1, i - 1] / B[i - 1, i - 1]
        return Representation(i, {i: one}, {})
    lows = an_low(B, i, U, tol)
    node_terms = {k: B[k - 1, i - 1] / B[k - 1, k - 1] for k in sorted(lows)}
    noise = (set(nmw_ancestors(B, i, U, tol)) | {i}) - U
    noise_terms = {j: B[j - 1, i - 1] for j in sorted(noise)}
    return Representation(i, node_terms, noise_terms)


def parent_representation(B, i, tol=DEFAULT_TOLERANCE):
    """``X_i`` through its parents in the minimum max-linear DAG plus ``b_ii Z_i``."""
    dag = minimum_ml_dag_from_B(B, tol)
    B = np.asarray(B)
    pa = dag.parents(i)
    node_terms = {k: B[k - 1, i - 1] / B[k - 1, k - 1] for k in sorted(pa)}
    return Representation(int(i), node_terms, {int(i): B[i - 1, i - 1]})
