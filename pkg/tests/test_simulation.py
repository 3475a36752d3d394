import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxlin import (
    Dag,
    NoiseSpec,
    RecursiveMLModel,
    check_order_relations,
    compute_B,
    eval_max_linear,
    random_model,
    recursive_evaluate,
    sample_noise,
    simulate,
)
from maxlin.simulation import RNG_ALGORITHM, SampleBatch, random_dag

from support import diamond


def test_same_seed_same_draws():
    spec = NoiseSpec(seed=42)
    assert np.array_equal(sample_noise(spec, 3, 10), sample_noise(spec, 3, 10))
    assert not np.array_equal(sample_noise(spec, 3, 10), sample_noise(NoiseSpec(seed=43), 3, 10))


def test_uniform_range_and_exponential_mean():
    U = sample_noise(NoiseSpec("uniform01", seed=1), 4, 1000)
    assert U.min() >= 0 and U.max() < 1
    E = sample_noise(NoiseSpec("exponential", rate=2.0, seed=1), 2, 20000)
    assert E.min() >= 0
    assert E.mean() == pytest.approx(0.5, rel=0.05)


def test_frechet_matches_closed_form_cdf():
    z = np.sort(sample_noise(NoiseSpec("frechet", alpha=1.0, seed=7), 1, 10_000)[:, 0])
    n = z.size
    cdf = np.exp(-1.0 / z)
    ks = max(np.max(np.arange(1, n + 1) / n - cdf), np.max(cdf - np.arange(n) / n))
    assert ks < 0.02


def test_frechet_shape_parameter():
    z = sample_noise(NoiseSpec("frechet", alpha=2.0, seed=3), 1, 20_000)[:, 0]
    # P(Z <= 1) = exp(-1) for every alpha; P(Z <= 2) = exp(-1/4) for alpha = 2
    assert np.mean(z <= 1) == pytest.approx(math.exp(-1), abs=0.015)
    assert np.mean(z <= 2) == pytest.approx(math.exp(-0.25), abs=0.015)


@pytest.mark.parametrize(
    "kwargs",
    [{"distribution": "normal"}, {"alpha": 0}, {"rate": -1}, {"seed": -1}, {"seed": 1.5}, {"alpha": math.inf}],
)
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        NoiseSpec(**kwargs)


def test_invalid_sizes():
    with pytest.raises(ValueError):
        sample_noise(NoiseSpec(), 0, 5)
    with pytest.raises(ValueError):
        sample_noise(NoiseSpec(), 2, -1)


def test_zero_noise_gives_zero_observations():
    m = diamond(exact=False)
    Z = np.zeros((1, 4))
    assert np.array_equal(recursive_evaluate(m, Z), Z)
    assert np.array_equal(eval_max_linear(compute_B(m), Z), Z)


def test_single_node():
    m = RecursiveMLModel(Dag(1), {}, [2.5])
    batch = simulate(m, NoiseSpec(seed=5), 20)
    assert np.allclose(batch.X[:, 0], 2.5 * batch.Z[:, 0])


def test_simulate_batch_and_export():
    m = diamond(exact=True)
    batch = simulate(m, NoiseSpec(seed=9), 30)
    assert batch.n == 30 and batch.Z.shape == batch.X.shape == (30, 4)
    assert np.allclose(batch.X, recursive_evaluate(m.as_float(), batch.Z))
    lines = batch.to_csv().splitlines()
    assert lines[0] == "sample,Z1,Z2,Z3,Z4,X1,X2,X3,X4"
    assert len(lines) == 31 and lines[1].startswith("1,")
    meta = batch.metadata()
    assert meta["seed"] == 9 and meta["rng"] == RNG_ALGORITHM and meta["model_hash"] == m.fingerprint()
    assert meta["spec"]["distribution"] == "frechet"


def test_empty_batch_is_header_only():
    batch = simulate(diamond(exact=False), NoiseSpec(), 0)
    assert batch.to_csv() == "sample,Z1,Z2,Z3,Z4,X1,X2,X3,X4\n"


def test_recursive_evaluation_exact():
    m = diamond()
    Z = np.array([[F(1), F(0), F(0), F(0)], [F(0), F(1, 2), F(2), F(1, 3)]], dtype=object)
    X = recursive_evaluate(m, Z)
    assert X.tolist() == [[1, F(1, 2), F(3, 10), F(2, 5)], [0, F(1, 2), 2, F(9, 5)]]
    assert (X == eval_max_linear(compute_B(m), Z)).all()
    assert list(recursive_evaluate(m, Z[1])) == X[1].tolist()
    with pytest.raises(ValueError):
        recursive_evaluate(m, np.zeros((2, 3)))


def test_order_relation_violation_is_reported():
    m = diamond(exact=False)
    B = compute_B(m)
    batch = simulate(m, NoiseSpec(seed=2), 10)
    assert check_order_relations(batch, B) == []
    X = batch.X.copy()
    X[3, 3] = 0.5 * 0.8 * X[3, 1]
    report = check_order_relations(X, B)
    assert (4, 2, 4) in report
    assert all(r == 4 for r, _, _ in report)


def test_edgeless_model_has_no_relations():
    m = RecursiveMLModel(Dag(3), {}, [1, 1, 1])
    assert check_order_relations(simulate(m, NoiseSpec(), 50), compute_B(m)) == []


def test_random_generators_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = random_model(rng, 6, 0.5, low=0.5, high=2.0, exact=True)
        assert all(F(1, 2) < w <= 2 for w in m.edge_weights.values())
        assert all(F(1, 2) < w <= 2 for w in m.noise_weights)
    D = random_dag(np.random.default_rng(1), 5, 1.0, permute=False)
    assert D.edges == {(a, b) for a in range(1, 6) for b in range(a + 1, 6)}


@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_recursive_matches_matrix_exact(seed, d):
    rng = np.random.default_rng(seed)
    m = random_model(rng, d, 0.5, exact=True)
    Z = np.array([[F(int(rng.integers(0, 50)), int(rng.integers(1, 9))) for _ in range(d)] for _ in range(5)])
    assert (recursive_evaluate(m, Z) == eval_max_linear(compute_B(m), Z)).all()


def test_recursive_matches_matrix_float_many_models():
    rng = np.random.default_rng(11)
    for n in range(200):
        m = random_model(rng, int(rng.integers(1, 9)), float(rng.uniform(0.2, 0.9)))
        Z = sample_noise(NoiseSpec(seed=n), m.d, 100)
        assert np.allclose(recursive_evaluate(m, Z), eval_max_linear(compute_B(m), Z), rtol=1e-12, atol=0)


def test_sample_batch_accepts_plain_arrays():
    b = SampleBatch(np.ones((1, 1)), np.ones((1, 1)), NoiseSpec(), "x")
    assert b.to_csv() == "sample,Z1,X1\n1,1.0,1.0\n"
