"""
Max-weighted paths, routing through node sets, polytrees and submodels.

A path from ``j`` to ``i`` is max-weighted when its weight equals ``b_ji``.
Whether some max-weighted path routes through a node set ``U`` can be read off
``B`` alone: it does iff ``b_ji = max_{k in De(j) & U & An(i)} b_jk b_ki / b_kk``.
"""
from __future__ import annotations

import numpy as np

from .dag import Dag
from .model import RecursiveMLModel, compute_B, path_weight
from .semiring import DEFAULT_TOLERANCE, is_exact, zeros

__all__ = [
    "is_max_weighted",
    "through_value",
    "has_max_weighted_path_through",
    "max_weighted_polytree",
    "induced_submodel",
]


def _square(B):
    B = np.asarray(B)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"B must be square, got shape {B.shape}")
    return B


def _node(B, i, name="node"):
    d = B.shape[0]
    if isinstance(i, bool) or int(i) != i or not 1 <= i <= d:
        raise ValueError(f"{name} {i!r} outside 1..{d}")
    return int(i)


def is_max_weighted(model, B, path, tol=DEFAULT_TOLERANCE):
    """True iff the weight of ``path`` attains ``b_ji`` for its end points ``j``, ``i``."""
    w = path_weight(model, path)
    j, i = int(path[0]), int(path[-1])
    return tol.close(w, np.asarray(B)[j - 1, i - 1])


def through_value(B, j, i, U):
    """``max_{k in De(j) & U & An(i)} b_jk * b_ki / b_kk``; zero for an empty range."""
    B = _square(B)
    best = zeros((), is_exact(B))[()]
    for k in U:
        k = _node(B, k)
        bjk, bki = B[j - 1, k - 1], B[k - 1, i - 1]
        if bjk > 0 and bki > 0:
            v = bjk * bki / B[k - 1, k - 1]
            if v > best:
                best = v
    return best


def has_max_weighted_path_through(B, j, i, U, tol=DEFAULT_TOLERANCE):
    """Whether some max-weighted path from ``j`` to ``i`` passes through a node of ``U``.

    Parameters
    ----------
    B : ndarray
        Max-linear coefficient matrix.
    j, i : int
        ``j`` must be a proper ancestor of ``i`` (``b_ji > 0``).
    U : iterable of int
        Node set; may be empty, in which case the answer is ``False``.

    Raises
    ------
    ValueError
        If ``j`` is not an ancestor of ``i``.
    """
    B = _square(B)
    j, i = _node(B, j), _node(B, i)
    if j == i or not B[j - 1, i - 1] > 0:
        raise ValueError(f"node {j} is not an ancestor of node {i}")
    return tol.close(B[j - 1, i - 1], through_value(B, j, i, U))


def max_weighted_polytree(model, B=None, i=None, tol=DEFAULT_TOLERANCE):
    """Polytree on ``An(i)`` holding one max-weighted path from every ancestor to ``i``.

    Each ancestor ``j`` is linked to the smallest-labelled child ``l`` for
    which ``c_jj c_jl b_li / b_ll = b_ji``, i.e. the edge ``j -> l`` starts a
    max-weighted path to ``i``. The chosen edges form an in-tree rooted at
    ``i``, so every ancestor has exactly one path to ``i`` and it is
    max-weighted.

    Returns
    -------
    Dag
        Same labels ``1..d`` as ``model.dag``; nodes outside ``An(i)`` are
        isolated.
    """
    if i is None:
        raise TypeError("node i is required")
    if B is None:
        B = compute_B(model)
    B = _square(B)
    dag = model.dag
    i = _node(B, i)
    edges = []
    for j in sorted(dag.ancestors(i)):
        cjj = model.noise_weights[j - 1]
        for l in sorted(dag.children(j)):
            if not dag.has_path(l, i):
                continue
            via = cjj * model.edge_weights[(j, l)] * B[l - 1, i - 1] / B[l - 1, l - 1]
            if tol.close(via, B[j - 1, i - 1]):
                edges.append((j, l))
                break
        else:
            raise ValueError(f"B is inconsistent with the model: no max-weighted edge leaves node {j}")
    return Dag(dag.d, edges)


def induced_submodel(model, subdag):
    """Submodel on a subgraph: same noise weights, edge weights restricted to ``subdag``.

    Raises
    ------
    ValueError
        If ``subdag`` is not a subgraph of ``model.dag``.
    """
    if not isinstance(subdag, Dag) or not subdag.is_subgraph_of(model.dag):
        raise ValueError("subdag is not a subgraph of the model DAG")
    weights = {e: model.edge_weights[e] for e in subdag.edges}
    return RecursiveMLModel(subdag, weights, model.noise_weights, exact=model.exact)
