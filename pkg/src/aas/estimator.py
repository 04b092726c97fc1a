"""scikit-learn compatible wrapper around the session score.

Rows of ``X`` are sessions, columns are channels, entries are recall scores
in [0, 1]. ``transform`` returns the weighted per-channel penalties
``w_i (1 - R_i) phi(x_i)``; ``score_samples`` returns their row sums, the
per-session AAS.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DomainError, ValidationError
from .kernel import DEFAULT_EPSILON, KernelConfig, phi
from .score import WEIGHT_TOLERANCE


class AgeScoreTransformer(TransformerMixin, BaseEstimator):
    """Redundancy-adjusted Artificial Age Score as a transformer.

    Parameters
    ----------
    epsilon : float, default=1e-6
        Smoothing constant of the penalty kernel.
    weights : array-like of shape (n_channels,), default=None
        Channel weights on the probability simplex. ``None`` means uniform.
    redundancy : float or array-like of shape (n_channels,), default=0.0
        Per-channel redundancy in [0, 1]. The default is redundancy-neutral,
        which makes every score a conservative upper bound.
    simplex : bool, default=True
        Require ``weights`` to sum to one.

    Attributes
    ----------
    weights_ : ndarray of shape (n_channels,)
    redundancy_ : ndarray of shape (n_channels,)
    coef_ : ndarray of shape (n_channels,)
        Effective multipliers ``w_i (1 - R_i)``.
    sup_penalty_ : float
        Kernel supremum ``M(epsilon)``; global upper bound of a session score.
    n_features_in_ : int
    """

    def __init__(self, epsilon=DEFAULT_EPSILON, weights=None, redundancy=0.0, simplex=True):
        self.epsilon = epsilon
        self.weights = weights
        self.redundancy = redundancy
        self.simplex = simplex

    def _validate_recall(self, X, reset):
        X = check_array(X, dtype=np.float64, ensure_all_finite=True)
        if reset:
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} channels, but {type(self).__name__} was fitted with {self.n_features_in_}"
            )
        if np.any((X < 0.0) | (X > 1.0)):
            raise DomainError("recall scores must lie in [0, 1]")
        return X

    def fit(self, X, y=None):
        X = self._validate_recall(X, reset=True)
        m = X.shape[1]
        self.kernel_ = KernelConfig(self.epsilon)
        if self.weights is None:
            w = np.full(m, 1.0 / m)
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.shape != (m,):
                raise ValidationError(f"expected {m} weights, got {w.shape[0]}")
            if np.any(w < 0):
                raise ValidationError("weights must be nonnegative")
            if self.simplex and abs(w.sum() - 1.0) > WEIGHT_TOLERANCE:
                raise ValidationError(f"weights must sum to 1, got {w.sum()!r}")
        r = np.broadcast_to(np.asarray(self.redundancy, dtype=float), (m,)).copy()
        if np.any((r < 0) | (r > 1)):
            raise ValidationError("redundancy values must lie in [0, 1]")
        self.weights_ = w
        self.redundancy_ = r
        self.coef_ = w * (1.0 - r)
        self.sup_penalty_ = self.kernel_.sup_penalty
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = self._validate_recall(X, reset=False)
        return self.weights_ * ((1.0 - self.redundancy_) * phi(X, self.kernel_))

    def score_samples(self, X):
        """Per-session AAS, summing channels left to right."""
        contributions = self.transform(X)
        totals = np.zeros(contributions.shape[0])
        for j in range(contributions.shape[1]):
            totals = totals + contributions[:, j]
        return totals

    def bounds(self):
        """``(0, M * sum w(1-R), M * sum w)`` for the fitted configuration."""
        check_is_fitted(self)
        return 0.0, self.sup_penalty_ * float(self.coef_.sum()), self.sup_penalty_ * float(self.weights_.sum())

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self)
        if input_features is None:
            input_features = [f"x{i}" for i in range(self.n_features_in_)]
        return np.asarray([f"aas_{name}" for name in input_features], dtype=object)
