"""
scikit-learn style wrappers around the functional core.

``MaxLinearSEM`` maps noise matrices to model observations (a transformer);
``ComponentPredictor`` bounds or reconstructs one component from observed
components. Both follow the estimator contract: hyper-parameters are stored
verbatim in ``__init__`` and fitted state ends in an underscore.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .inference import an_low, bounds, de_high, minimal_representation
from .model import RecursiveMLModel, compute_B, eval_max_linear
from .semiring import Tolerance, as_matrix, is_exact
from .simulation import NoiseSpec, simulate
from .structure import _check_valid, minimum_ml_dag_from_model

__all__ = ["MaxLinearSEM", "ComponentPredictor"]


def _non_negative(X, name, n_features=None):
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    if (X < 0).any():
        raise ValueError(f"{name} must be non-negative")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"{name} has {X.shape[1]} columns, expected {n_features}")
    return X


class MaxLinearSEM(TransformerMixin, BaseEstimator):
    """Recursive max-linear model as a transformer from noise to observations.

    Parameters
    ----------
    model : RecursiveMLModel or dict
        The model, or its JSON form.
    exact : bool, default=False
        Compute ``coef_`` with exact rational arithmetic.
    rtol : float, default=1e-9
        Relative tolerance for equality decisions.

    Attributes
    ----------
    coef_ : ndarray of shape (d, d)
        Max-linear coefficient matrix ``B``.
    order_ : tuple of int
        Topological order of the model DAG.
    min_dag_ : Dag
        Minimum max-linear DAG.
    n_features_in_ : int
    """

    def __init__(self, model=None, exact=False, rtol=1e-9):
        self.model = model
        self.exact = exact
        self.rtol = rtol

    def _model(self):
        if self.model is None:
            raise ValueError("a model is required")
        m = self.model
        if isinstance(m, dict):
            m = RecursiveMLModel.from_json(m, exact=self.exact)
        return m.as_exact() if self.exact else m.as_float()

    def fit(self, X=None, y=None):
        """Compute ``B`` and the derived structure. ``X`` is ignored."""
        m = self._model()
        self.model_ = m
        self.coef_ = compute_B(m)
        self.order_ = m.dag.order
        self.min_dag_ = minimum_ml_dag_from_model(m, self.coef_, Tolerance(rtol=self.rtol))
        self.n_features_in_ = m.d
        return self

    def transform(self, Z):
        """``X = Z (.) B`` row by row."""
        check_is_fitted(self, "coef_")
        Z = _non_negative(Z, "Z", self.n_features_in_)
        return eval_max_linear(np.asarray(self.coef_, dtype=float), Z)

    def sample(self, n, noise=None):
        """Simulated :class:`~maxlin.simulation.SampleBatch` of size ``n``."""
        check_is_fitted(self, "coef_")
        return simulate(self.model_.as_float(), noise or NoiseSpec(), n)


class ComponentPredictor(BaseEstimator):
    """Bounds and representation of ``X_node`` from the observed components ``given``.

    Parameters
    ----------
    node : int
        Target component (1-based).
    given : sequence of int
        Observed components; columns of ``X_U`` follow ``sorted(given)``.
    rtol : float, default=1e-9

    Attributes
    ----------
    coef_ : ndarray
        The validated coefficient matrix.
    an_low_, de_high_ : frozenset
        Lowest max-weighted ancestors and highest max-weighted descendants
        of ``node`` in ``given``.
    representation_ : Representation
    """

    def __init__(self, node=1, given=(), rtol=1e-9):
        self.node = node
        self.given = given
        self.rtol = rtol

    def fit(self, B, y=None):
        tol = Tolerance(rtol=self.rtol)
        arr = np.asarray(B)
        B = _check_valid(arr if is_exact(arr) else as_matrix(B, exact=False, name="B"), tol)
        U = sorted(set(self.given))
        self.coef_ = B
        self.given_ = tuple(U)
        self.an_low_ = an_low(B, self.node, U, tol)
        self.de_high_ = de_high(B, self.node, U, tol)
        self.representation_ = minimal_representation(B, self.node, U, tol)
        self.n_features_in_ = B.shape[0]
        return self

    def predict_bounds(self, X_U):
        """Array of shape (n, 2) with the lower and upper bound per row."""
        check_is_fitted(self, "coef_")
        X_U = _non_negative(X_U, "X_U", len(self.given_))
        tol = Tolerance(rtol=self.rtol)
        out = np.empty((X_U.shape[0], 2))
        for r, row in enumerate(X_U):
            out[r] = bounds(self.coef_, self.node, self.given_, dict(zip(self.given_, row)), tol)
        return out

    def predict(self, X_U, Z):
        """``X_node`` from observed components and the noise it still needs.

        ``Z`` is the full ``n x d`` noise matrix; only columns used by the
        minimal representation are read.
        """
        check_is_fitted(self, "coef_")
        X_U = _non_negative(X_U, "X_U", len(self.given_))
        Z = _non_negative(Z, "Z", self.n_features_in_)
        X = np.zeros((X_U.shape[0], self.n_features_in_))
        for c, k in enumerate(self.given_):
            X[:, k - 1] = X_U[:, c]
        return self.representation_.evaluate_batch(X, Z)
