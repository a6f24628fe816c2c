"""Feature scaling shared by the distance- and margin-based learners."""

from __future__ import annotations

import numpy as np

from .base import ParamsMixin, check_is_fitted, check_matrix

# lower bound on the per-column scale; keeps constant columns at exactly 0
STD_FLOOR = 1e-9


class Standardizer(ParamsMixin):
    """Column-wise z-scoring with the population standard deviation.

    The scale of each column is floored at ``STD_FLOOR``, so a constant
    column maps to exactly 0 (its deviations are exactly zero) instead of
    dividing by zero. Fitted attributes: ``mean_``, ``scale_``,
    ``n_features_in_``.
    """

    def fit(self, X, y=None):
        X = check_matrix(X)
        self.mean_ = X.mean(axis=0)
        self.scale_ = np.maximum(X.std(axis=0), STD_FLOOR)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_matrix(X, n_features=self.n_features_in_, allow_1d=True)
        return (X - self.mean_) / self.scale_

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def inverse_transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_matrix(X, n_features=self.n_features_in_, allow_1d=True)
        return X * self.scale_ + self.mean_

    def get_state(self):
        check_is_fitted(self, "mean_")
        return {
            "n_features_in": int(self.n_features_in_),
            "mean": self.mean_.tolist(),
            "scale": self.scale_.tolist(),
        }

    def set_state(self, state):
        self.n_features_in_ = state["n_features_in"]
        self.mean_ = np.asarray(state["mean"], dtype=np.float64)
        self.scale_ = np.asarray(state["scale"], dtype=np.float64)
        return self
