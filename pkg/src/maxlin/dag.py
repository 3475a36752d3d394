"""
Directed acyclic graphs on nodes ``1..d``.

Node labels are 1-based everywhere in the public API; matrices are indexed
``M[j - 1, i - 1]`` for the pair ``(j, i)``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import CycleError
from .semiring import format_number

__all__ = [
    "Dag",
    "topological_order",
    "reachability_matrix",
    "ancestors",
    "descendants",
    "parents",
    "children",
    "transitive_reduction",
    "transitive_closure",
    "is_polytree",
    "is_reachability_matrix",
    "dag_from_reachability",
    "to_dot",
]


def _find_cycle(d, succ):
    color = [0] * (d + 1)
    stack_path = []

    for root in range(1, d + 1):
        if color[root]:
            continue
        stack = [(root, iter(sorted(succ[root])))]
        color[root] = 1
        stack_path.append(root)
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                stack_path.pop()
            elif color[nxt] == 1:
                start = stack_path.index(nxt)
                return stack_path[start:] + [nxt]
            elif color[nxt] == 0:
                color[nxt] = 1
                stack_path.append(nxt)
                stack.append((nxt, iter(sorted(succ[nxt]))))
    return None


@dataclass(frozen=True)
class Dag:
    """Immutable DAG with nodes ``1..d``.

    Parameters
    ----------
    d : int
        Number of nodes, at least 1.
    edges : iterable of (int, int)
        Directed edges ``(k, i)`` meaning ``k -> i``. Duplicates are rejected.

    Raises
    ------
    ValueError
        On a bad node count, out-of-range label, self-loop or duplicate edge.
    CycleError
        If the edges contain a directed cycle.
    """

    d: int
    edges: frozenset

    def __init__(self, d, edges=()):
        if isinstance(d, bool) or int(d) != d or d < 1:
            raise ValueError(f"node count must be a positive integer, got {d!r}")
        d = int(d)
        seen = set()
        for e in edges:
            k, i = e
            if int(k) != k or int(i) != i:
                raise ValueError(f"node labels must be integers, got {e!r}")
            k, i = int(k), int(i)
            if not (1 <= k <= d and 1 <= i <= d):
                raise ValueError(f"edge ({k}, {i}) has a node outside 1..{d}")
            if k == i:
                raise ValueError(f"self-loop at node {k}")
            if (k, i) in seen:
                raise ValueError(f"duplicate edge ({k}, {i})")
            seen.add((k, i))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "edges", frozenset(seen))
        # fail fast on cycles
        self.order

    def __repr__(self):
        return f"Dag(d={self.d}, edges={sorted(self.edges)})"

    @property
    def nodes(self):
        return range(1, self.d + 1)

    @cached_property
    def sorted_edges(self):
        return tuple(sorted(self.edges))

    @cached_property
    def _succ(self):
        succ = {v: set() for v in range(1, self.d + 1)}
        for k, i in self.edges:
            succ[k].add(i)
        return succ

    @cached_property
    def _pred(self):
        pred = {v: set() for v in range(1, self.d + 1)}
        for k, i in self.edges:
            pred[i].add(k)
        return pred

    @cached_property
    def order(self):
        """Topological order; ties broken by smallest label (Kahn with a heap)."""
        indeg = {v: len(self._pred[v]) for v in self.nodes}
        heap = [v for v in self.nodes if indeg[v] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            v = heapq.heappop(heap)
            out.append(v)
            for w in self._succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(out) != self.d:
            raise CycleError(_find_cycle(self.d, self._succ))
        return tuple(out)

    @cached_property
    def reachability(self):
        """Boolean array ``R[j-1, i-1]``: ``j == i`` or a path ``j -> ... -> i`` exists."""
        R = np.eye(self.d, dtype=bool)
        for v in reversed(self.order):
            for w in self._succ[v]:
                R[v - 1] |= R[w - 1]
        R.setflags(write=False)
        return R

    def parents(self, i):
        return frozenset(self._pred[self._check(i)])

    def children(self, i):
        return frozenset(self._succ[self._check(i)])

    def ancestors(self, i, inclusive=False):
        """``an(i)``; with ``inclusive=True`` the closed set ``An(i)``."""
        i = self._check(i)
        col = self.reachability[:, i - 1]
        out = {int(j) + 1 for j in np.flatnonzero(col)}
        if not inclusive:
            out.discard(i)
        return frozenset(out)

    def descendants(self, i, inclusive=False):
        i = self._check(i)
        row = self.reachability[i - 1]
        out = {int(j) + 1 for j in np.flatnonzero(row)}
        if not inclusive:
            out.discard(i)
        return frozenset(out)

    def has_path(self, j, i):
        """True if ``i`` is reachable from ``j`` (including ``j == i``)."""
        return bool(self.reachability[self._check(j) - 1, self._check(i) - 1])

    def _check(self, i):
        if isinstance(i, bool) or int(i) != i or not 1 <= i <= self.d:
            raise ValueError(f"node {i!r} outside 1..{self.d}")
        return int(i)

    def is_subgraph_of(self, other):
        return self.d == other.d and self.edges <= other.edges

    def to_json(self):
        return {"d": self.d, "edges": [list(e) for e in self.sorted_edges]}

    @classmethod
    def from_json(cls, obj):
        """Accepts ``{"d": n, "edges": [[k, i], ...]}`` or edges as ``{"from", "to"}`` objects."""
        if not isinstance(obj, dict) or "d" not in obj:
            raise ValueError("DAG JSON must be an object with a 'd' field")
        edges = []
        for e in obj.get("edges", []):
            if isinstance(e, dict):
                edges.append((e["from"], e["to"]))
            else:
                k, i = e
                edges.append((k, i))
        return cls(obj["d"], edges)


def topological_order(D):
    """Permutation of ``1..d`` in which every parent precedes its children."""
    return list(D.order)


def reachability_matrix(D):
    """0/1 integer matrix with ``r[j-1, i-1] = 1`` iff ``j == i`` or ``i`` is reachable from ``j``."""
    return D.reachability.astype(int)


def ancestors(D, i, inclusive=False):
    return D.ancestors(i, inclusive)


def descendants(D, i, inclusive=False):
    return D.descendants(i, inclusive)


def parents(D, i):
    return D.parents(i)


def children(D, i):
    return D.children(i)


def transitive_reduction(D):
    """Unique minimal-edge subgraph with the same reachability.

    Edge ``k -> i`` is dropped when ``D`` has another path from ``k`` to
    ``i``, i.e. when some other child of ``k`` reaches ``i``.
    """
    R = D.reachability
    kept = []
    for k, i in D.edges:
        if not any(R[l - 1, i - 1] for l in D._succ[k] if l != i):
            kept.append((k, i))
    return Dag(D.d, kept)


def transitive_closure(D):
    """DAG with an edge ``j -> i`` for every path ``j -> ... -> i`` in ``D``."""
    R = D.reachability
    return Dag(D.d, [(int(j) + 1, int(i) + 1) for j, i in zip(*np.nonzero(R)) if j != i])


def is_polytree(D):
    """True iff the undirected skeleton of ``D`` is a forest."""
    parent = list(range(D.d + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, i in D.sorted_edges:
        rk, ri = find(k), find(i)
        if rk == ri:
            return False
        parent[rk] = ri
    return True


def is_reachability_matrix(S):
    """True iff ``S`` (0/1 or any non-negative pattern) is the reachability matrix of a DAG.

    Checks a unit diagonal, transitivity and antisymmetry of the
    off-diagonal part. Non-zero entries count as ones.
    """
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"matrix must be square, got shape {S.shape}")
    P = S > 0
    d = P.shape[0]
    if not P.diagonal().all():
        return False
    off = P & ~np.eye(d, dtype=bool)
    if (off & off.T).any():
        return False
    # transitivity: P composed with P stays inside P
    Pi = P.astype(np.int64)
    return not ((Pi @ Pi > 0) & ~P).any()


def dag_from_reachability(S):
    """Transitive closure DAG whose reachability matrix is ``sgn(S)``."""
    if not is_reachability_matrix(S):
        raise ValueError("pattern is not the reachability matrix of a DAG")
    P = np.asarray(S) > 0
    d = P.shape[0]
    return Dag(d, [(j + 1, i + 1) for j in range(d) for i in range(d) if j != i and P[j, i]])


def to_dot(D, weights=None, name="G"):
    """Graphviz DOT text with deterministic (sorted) node and edge order.

    Parameters
    ----------
    weights : mapping (k, i) -> number, optional
        Edge labels; written as ``k -> i [label="w"];``.
    """
    lines = [f"digraph {name} {{"]
    for v in D.nodes:
        lines.append(f"  {v};")
    for k, i in D.sorted_edges:
        if weights is not None and (k, i) in weights:
            lines.append(f'  {k} -> {i} [label="{format_number(weights[(k, i)])}"];')
        else:
            lines.append(f"  {k} -> {i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
