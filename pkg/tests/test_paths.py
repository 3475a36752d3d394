from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxlin import (
    Dag,
    compute_B,
    has_max_weighted_path_through,
    induced_submodel,
    is_max_weighted,
    is_polytree,
    iter_paths,
    max_weighted_polytree,
    path_weight,
    random_model,
    through_value,
)

from support import diamond, triangle


def test_diamond_routes():
    m = diamond()
    B = compute_B(m)
    assert is_max_weighted(m, B, [1, 2, 4])
    assert not is_max_weighted(m, B, [1, 3, 4])
    assert has_max_weighted_path_through(B, 1, 4, {2})
    assert not has_max_weighted_path_through(B, 1, 4, {3})
    assert has_max_weighted_path_through(B, 1, 4, {1})  # end points count
    assert not has_max_weighted_path_through(B, 1, 4, set())
    assert through_value(B, 1, 4, {3}) == F(27, 100)
    assert through_value(B, 1, 4, set()) == 0


def test_not_an_ancestor():
    B = compute_B(diamond())
    with pytest.raises(ValueError):
        has_max_weighted_path_through(B, 2, 3, {1})
    with pytest.raises(ValueError):
        has_max_weighted_path_through(B, 4, 4, {1})


def test_diamond_polytree():
    m = diamond()
    tree = max_weighted_polytree(m, i=4)
    assert tree.edges == {(1, 2), (2, 4), (3, 4)}
    assert is_polytree(tree)
    sub = induced_submodel(m, tree)
    assert (compute_B(sub)[:, 3] == compute_B(m)[:, 3]).all()


def test_polytree_of_source_is_edgeless():
    tree = max_weighted_polytree(diamond(), i=1)
    assert tree.edges == frozenset() and tree.d == 4


def test_polytree_requires_node():
    with pytest.raises(TypeError):
        max_weighted_polytree(diamond())


def test_induced_submodel_rejects_foreign_graph():
    with pytest.raises(ValueError):
        induced_submodel(triangle(), Dag(3, [(3, 1)]))


def brute_through(model, B, j, i, U):
    return any(
        is_max_weighted(model, B, p) and set(p) & set(U) for p in iter_paths(model.dag, j, i)
    )


@given(st.integers(0, 2**32 - 1), st.integers(2, 7), st.data())
def test_through_matches_path_enumeration(seed, d, data):
    m = random_model(np.random.default_rng(seed), d, 0.6, exact=True)
    B = compute_B(m)
    U = data.draw(st.sets(st.integers(1, d)))
    for j in range(1, d + 1):
        for i in m.dag.descendants(j):
            assert has_max_weighted_path_through(B, j, i, U) == bool(brute_through(m, B, j, i, U))


@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_polytree_paths_are_max_weighted(seed, d):
    m = random_model(np.random.default_rng(seed), d, 0.6, exact=True)
    B = compute_B(m)
    for i in range(1, d + 1):
        tree = max_weighted_polytree(m, B, i)
        assert is_polytree(tree)
        assert tree.edges <= m.dag.edges
        for j in m.dag.ancestors(i):
            paths = list(iter_paths(tree, j, i))
            assert len(paths) == 1
            assert path_weight(m, paths[0]) == B[j - 1, i - 1]
        assert (compute_B(induced_submodel(m, tree))[:, i - 1] == B[:, i - 1]).all()
