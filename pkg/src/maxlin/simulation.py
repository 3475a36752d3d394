"""
Noise sampling and Monte Carlo evaluation of recursive max-linear models.

Random streams come from numpy's ``PCG64`` bit generator seeded with the
``NoiseSpec`` seed; the algorithm name is recorded in batch metadata. Streams are
reproducible for a given seed and numpy's PCG64, nothing more.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .dag import Dag
from .model import RecursiveMLModel, compute_B, eval_max_linear
from .semiring import DEFAULT_TOLERANCE, format_number

__all__ = [
    "NoiseSpec",
    "SampleBatch",
    "RNG_ALGORITHM",
    "sample_noise",
    "recursive_evaluate",
    "simulate",
    "check_order_relations",
    "random_dag",
    "random_model",
]

RNG_ALGORITHM = "numpy.random.PCG64"
DISTRIBUTIONS = ("frechet", "uniform01", "exponential")


@dataclass(frozen=True)
class NoiseSpec:
    """I.i.d. non-negative noise distribution.

    Parameters
    ----------
    distribution : {"frechet", "uniform01", "exponential"}
        ``frechet`` has CDF ``exp(-z**-alpha)`` on ``(0, inf)``; ``exponential``
        has rate ``rate``.
    alpha : float
        Fréchet shape, positive.
    rate : float
        Exponential rate, positive.
    seed : int
        Seed of the PCG64 stream.
    """

    distribution: str = "frechet"
    alpha: float = 1.0
    rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}; choose from {DISTRIBUTIONS}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be positive")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValueError("rate must be positive")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an integer in [0, 2**64)")

    def rng(self):
        return np.random.Generator(np.random.PCG64(int(self.seed)))


def sample_noise(spec, d, n):
    """``n x d`` matrix of i.i.d. draws from ``spec``; deterministic given the seed.

    Fréchet draws use the inverse CDF ``z = (-log u) ** (-1 / alpha)``.
    """
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    u = spec.rng().random((int(n), int(d)))
    if spec.distribution == "uniform01":
        return u
    if spec.distribution == "exponential":
        # 1 - u lies in (0, 1]
        return -np.log1p(-u) / spec.rate
    with np.errstate(divide="ignore"):
        return (-np.log(u)) ** (-1.0 / spec.alpha)


def recursive_evaluate(model, Z):
    """Evaluate the structural equations node by node in topological order.

    Independent of ``B``: ``X_i = max(c_ii Z_i, max_{k in pa(i)} c_ki X_k)``.
    ``Z`` is an ``n x d`` array (float or Fraction objects).
    """
    Z = np.asarray(Z)
    single = Z.ndim == 1
    if single:
        Z = Z[None, :]
    if Z.shape[1] != model.d:
        raise ValueError(f"Z has {Z.shape[1]} columns, expected {model.d}")
    X = np.empty_like(Z, dtype=object if Z.dtype == object else float)
    dag = model.dag
    for i in dag.order:
        col = model.noise_weights[i - 1] * Z[:, i - 1]
        for k in dag.parents(i):
            col = np.maximum(col, model.edge_weights[(k, i)] * X[:, k - 1])
        X[:, i - 1] = col
    return X[0] if single else X


@dataclass
class SampleBatch:
    """``n`` samples of the noise ``Z`` and the model vector ``X = Z (.) B``."""

    Z: np.ndarray
    X: np.ndarray
    spec: NoiseSpec
    model_hash: str

    @property
    def n(self):
        return self.Z.shape[0]

    def to_csv(self):
        """CSV with header ``sample,Z1..Zd,X1..Xd``; samples numbered from 1."""
        d = self.Z.shape[1]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["sample", *(f"Z{i}" for i in range(1, d + 1)), *(f"X{i}" for i in range(1, d + 1))])
        for r in range(self.n):
            writer.writerow([r + 1, *map(format_number, self.Z[r]), *map(format_number, self.X[r])])
        return buf.getvalue()

    def metadata(self):
        return {
            "n": int(self.n),
            "d": int(self.Z.shape[1]),
            "seed": int(self.spec.seed),
            "spec": asdict(self.spec),
            "rng": RNG_ALGORITHM,
            "model_hash": self.model_hash,
        }


def simulate(model, spec=None, n=1, B=None):
    """Draw ``n`` noise vectors and map them through ``B = compute_B(model)``."""
    spec = spec if spec is not None else NoiseSpec()
    if B is None:
        B = compute_B(model.as_float() if model.exact else model)
    Z = sample_noise(spec, model.d, n)
    X = eval_max_linear(np.asarray(B, dtype=float), Z) if n else np.zeros((0, model.d))
    return SampleBatch(Z, X, spec, model.fingerprint())


def check_order_relations(X, B, tol=DEFAULT_TOLERANCE):
    """Samples violating ``(b_ji / b_jj) X_j <= X_i`` for ``j`` in ``An(i)``.

    Parameters
    ----------
    X : SampleBatch or ndarray (n x d)

    Returns
    -------
    list of (sample, j, i)
        1-based sample index and node labels; empty when all relations hold.
    """
    if isinstance(X, SampleBatch):
        X = X.X
    X = np.asarray(X, dtype=float)
    B = np.asarray(B, dtype=float)
    d = B.shape[0]
    out = []
    for j in range(d):
        for i in range(d):
            if i == j or B[j, i] <= 0:
                continue
            lhs = B[j, i] / B[j, j] * X[:, j]
            bad = lhs > X[:, i] * (1 + tol.rtol) + tol.atol
            out.extend((int(r) + 1, j + 1, i + 1) for r in np.flatnonzero(bad))
    return sorted(out)


def random_dag(rng, d, edge_prob=0.5, permute=True):
    """Random DAG: each forward pair of a random order is an edge with ``edge_prob``."""
    order = rng.permutation(d) + 1 if permute else np.arange(1, d + 1)
    edges = [
        (int(order[a]), int(order[b]))
        for a in range(d)
        for b in range(a + 1, d)
        if rng.random() < edge_prob
    ]
    return Dag(d, edges)


def random_model(rng, d, edge_prob=0.5, low=0.0, high=2.0, exact=False, grid=1000, permute=True):
    """Random model with all weights in ``(low, high]``.

    Exact models draw weights from the grid ``low + (high - low) * m / grid``
    with ``m`` in ``1..grid``; float models draw uniformly.
    """
    dag = random_dag(rng, d, edge_prob, permute)

    def draw():
        if exact:
            m = int(rng.integers(1, grid + 1))
            return Fraction(low).limit_denominator() + (Fraction(high) - Fraction(low)) * Fraction(m, grid)
        return low + (high - low) * (1.0 - rng.random())

    weights = {e: draw() for e in dag.sorted_edges}
    noise = [draw() for _ in range(d)]
    return RecursiveMLModel(dag, weights, noise, exact=exact)
