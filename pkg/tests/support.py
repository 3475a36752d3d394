"""Shared fixtures and generators for the test suite."""
from fractions import Fraction as F
from pathlib import Path

import numpy as np

from maxlin import Dag, RecursiveMLModel, random_model

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def diamond(exact=True):
    dag = Dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    w = {(1, 2): F(1, 2), (1, 3): F(3, 10), (2, 4): F(4, 5), (3, 4): F(9, 10)}
    return RecursiveMLModel(dag, w, [1, 1, 1, 1], exact=exact)


def triangle(c13=F(1, 5), exact=True):
    dag = Dag(3, [(1, 2), (2, 3), (1, 3)])
    w = {(1, 2): F(1, 2), (2, 3): F(3, 5), (1, 3): F(c13)}
    return RecursiveMLModel(dag, w, [1, 1, 1], exact=exact)


def diamond_B(b14=F(2, 5)):
    B = np.array(
        [
            [F(1), F(1, 2), F(3, 10), F(b14)],
            [F(0), F(1), F(0), F(4, 5)],
            [F(0), F(0), F(1), F(9, 10)],
            [F(0), F(0), F(0), F(1)],
        ],
        dtype=object,
    )
    return B


def model_stream(count, seed, d_min=1, d_max=8, low=0.0, high=2.0, exact=False):
    """Deterministic list of random models; edge density varies per model."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        d = int(rng.integers(d_min, d_max + 1))
        p = float(rng.uniform(0.2, 0.9))
        out.append(random_model(rng, d, p, low, high, exact=exact))
    return out


def sample_in_interval(rng, iv, exact, grid=1000):
    """Draw from the half-open interval ``(lower, upper]``, endpoint included with positive probability."""
    m = int(rng.integers(1, grid + 1))
    if exact:
        return iv.lower + (iv.upper - iv.lower) * F(m, grid)
    return float(iv.lower + (iv.upper - iv.lower) * (m / grid))
