import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxlin import (
    NoiseSpec,
    an_low,
    bounds,
    compute_B,
    de_high,
    eval_max_linear,
    has_max_weighted_path_through,
    minimal_representation,
    nmw_ancestors,
    parent_representation,
    random_model,
    raw_bounds,
    sample_noise,
)
from maxlin.semiring import DEFAULT_TOLERANCE

from support import diamond, diamond_B, triangle

B = compute_B(diamond())
seeds = st.integers(0, 2**32 - 1)


def test_an_low_examples():
    assert an_low(B, 4, {1, 2}) == {2}
    assert an_low(diamond_B(F(1, 2)), 4, {1, 2}) == {1, 2}
    assert an_low(B, 2, {2, 1}) == {2}
    assert an_low(B, 4, set()) == frozenset()


def test_de_high_examples():
    assert de_high(B, 1, {2, 4}) == {2}
    assert de_high(B, 1, {1}) == {1}
    assert de_high(B, 2, {3}) == frozenset()


def test_bounds_examples():
    assert bounds(B, 4, {2}, {2: 2.0}) == (pytest.approx(1.6), math.inf)
    assert bounds(B, 2, {2}, {2: 3.5}) == (3.5, 3.5)
    assert bounds(B, 2, {3}, {3: 1.0}) == (0, math.inf)
    assert bounds(B, 4, set(), {}) == (0, math.inf)
    lo, hi = bounds(B, 2, {1, 4}, {1: F(1), 4: F(2)})
    assert (lo, hi) == (F(1, 2), F(5, 2))


def test_bounds_errors():
    with pytest.raises(ValueError):
        bounds(B, 4, {2}, {2: -1.0})
    with pytest.raises(ValueError):
        bounds(B, 4, {2}, {})
    with pytest.raises(ValueError):
        bounds(B, 5, {2}, {2: 1.0})


def test_nmw_examples():
    assert nmw_ancestors(B, 4, {1, 2}) == {3}
    assert nmw_ancestors(B, 4, {1, 2, 3, 4}) == frozenset()
    assert nmw_ancestors(B, 4, set()) == {1, 2, 3}


def test_minimal_representation_examples():
    rep = minimal_representation(B, 4, {1, 2})
    assert rep.node_terms == {2: F(4, 5)}
    assert rep.noise_terms == {3: F(9, 10), 4: F(1)}
    assert rep.to_json() == {"node_terms": {"2": "4/5"}, "noise_terms": {"3": "9/10", "4": "1"}}
    Bf = B.astype(float)
    assert minimal_representation(Bf, 4, {1, 2}).to_json() == {
        "node_terms": {"2": 0.8},
        "noise_terms": {"3": 0.9, "4": 1.0},
    }
    rep2 = minimal_representation(diamond_B(F(1, 2)), 4, {1, 2})
    assert rep2.node_terms == {1: F(1, 2), 2: F(4, 5)}
    self_rep = minimal_representation(B, 3, {3})
    assert self_rep.node_terms == {3: 1} and self_rep.noise_terms == {}


def test_parent_representation_examples():
    assert parent_representation(B, 1).node_terms == {}
    assert parent_representation(B, 1).noise_terms == {1: 1}
    rep = parent_representation(B, 4)
    assert rep.node_terms == {2: F(4, 5), 3: F(9, 10)} and rep.noise_terms == {4: 1}
    tri = parent_representation(compute_B(triangle()), 3)
    assert tri.node_terms == {2: F(3, 5)} and tri.noise_terms == {3: 1}


def test_representation_evaluate_and_without():
    rep = minimal_representation(B, 4, {1, 2})
    x = [F(1), F(2), F(0), F(0)]
    z = [F(0), F(0), F(3), F(1)]
    assert rep.evaluate(x, z) == F(27, 10)
    smaller = rep.without("noise", 3)
    assert smaller.noise_terms == {4: 1} and rep.noise_terms == {3: F(9, 10), 4: 1}
    assert smaller.evaluate(x, z) == F(8, 5)


def _random_query(seed, d, data):
    m = random_model(np.random.default_rng(seed), d, 0.6, low=0.5, high=2.0)
    Bm = compute_B(m)
    i = data.draw(st.integers(1, d))
    U = data.draw(st.sets(st.integers(1, d)))
    return m, Bm, i, U


@given(seeds, st.integers(1, 7), st.data())
def test_bounds_sandwich_and_reduction(seed, d, data):
    m, Bm, i, U = _random_query(seed, d, data)
    X = eval_max_linear(Bm, sample_noise(NoiseSpec(seed=seed % 1000), d, 50))
    for row in X:
        x_U = {u: row[u - 1] for u in U}
        lo, hi = bounds(Bm, i, U, x_U)
        rlo, rhi = raw_bounds(Bm, i, U, x_U)
        assert lo <= row[i - 1] * (1 + 1e-9) and row[i - 1] <= hi * (1 + 1e-9)
        assert lo == pytest.approx(rlo, rel=1e-9) and hi == pytest.approx(rhi, rel=1e-9)


@given(seeds, st.integers(1, 7), st.data())
def test_representation_reproduces_component(seed, d, data):
    m, Bm, i, U = _random_query(seed, d, data)
    Z = sample_noise(NoiseSpec(seed=seed % 1000), d, 50)
    X = eval_max_linear(Bm, Z)
    rep = minimal_representation(Bm, i, U)
    assert set(rep.node_terms) == set(an_low(Bm, i, U))
    assert np.allclose(rep.evaluate_batch(X, Z), X[:, i - 1], rtol=1e-9, atol=0)


@given(seeds, st.integers(2, 7), st.data())
def test_routing_through_lowest_ancestors(seed, d, data):
    m, Bm, i, U = _random_query(seed, d, data)
    lows = an_low(Bm, i, U)
    for j in m.dag.ancestors(i):
        assert has_max_weighted_path_through(Bm, j, i, U) == has_max_weighted_path_through(Bm, j, i, lows)


@given(seeds, st.integers(1, 7), st.data())
def test_nmw_complement_routes_through_U(seed, d, data):
    m, Bm, i, U = _random_query(seed, d, data)
    nmw = nmw_ancestors(Bm, i, U)
    for j in m.dag.ancestors(i):
        assert (j in nmw) == (not has_max_weighted_path_through(Bm, j, i, U))


def undershoot_probability(Bm, rep, kind, node):
    """Chance that dropping one term lowers the representation, under Frechet(1) noise.

    With Frechet(1) noise, ``argmax_j b_ji Z_j`` equals ``j`` with probability
    ``b_ji / sum_l b_li``; dropping the term loses exactly the ``j`` that no
    other term reaches with full coefficient.
    """
    d = Bm.shape[0]
    i = rep.node
    col = Bm[:, i - 1]
    terms = {}
    for k, c in rep.node_terms.items():
        terms[("node", k)] = [Bm[j, k - 1] * c for j in range(d)]
    for j, c in rep.noise_terms.items():
        terms[("noise", j)] = [c if l == j - 1 else 0 for l in range(d)]
    others = [max([0] + [v[j] for t, v in terms.items() if t != (kind, node)]) for j in range(d)]
    lost = sum(col[j] for j in range(d) if col[j] > 0 and not DEFAULT_TOLERANCE.close(others[j], col[j]))
    return lost / sum(col)


@given(seeds, st.integers(1, 7), st.data())
def test_every_term_is_needed(seed, d, data):
    m = random_model(np.random.default_rng(seed), d, 0.6, exact=True)
    Bm = compute_B(m)
    i = data.draw(st.integers(1, d))
    U = data.draw(st.sets(st.integers(1, d)))
    rep = minimal_representation(Bm, i, U)
    for kind, node in [("node", k) for k in rep.node_terms] + [("noise", j) for j in rep.noise_terms]:
        if i in U:
            continue
        assert undershoot_probability(Bm, rep, kind, node) > 0
