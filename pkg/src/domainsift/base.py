"""Shared estimator plumbing: parameter handling and input validation."""

from __future__ import annotations

import hashlib
import inspect

import numpy as np


class NotFittedError(RuntimeError):
    """Raised when predict/transform is called on an unfitted estimator."""


class ParamsMixin:
    """get_params/set_params in the scikit-learn style.

    Parameters are whatever the subclass accepts in ``__init__`` and stores
    under the same attribute name, which makes these estimators clonable by
    and composable with the wider scikit-learn ecosystem without depending
    on it.
    """

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [
            p.name
            for p in sig.parameters.values()
            if p.name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = self._param_names()
        for key, value in params.items():
            if key not in valid:
                raise ValueError(
                    f"invalid parameter {key!r} for {type(self).__name__}; "
                    f"valid parameters are {valid}"
                )
            setattr(self, key, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_is_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )


def check_matrix(X, n_features=None, allow_1d=False, name="X"):
    """Coerce to a finite 2-D float64 array; 1-D input becomes a single row."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        if not allow_1d:
            raise ValueError(f"{name} must be 2-dimensional, got 1-dimensional")
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got {X.ndim} dimensions")
    if X.shape[0] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"{name} has {X.shape[1]} features, expected {n_features}")
    return X


def check_labels(y, n_samples=None, name="y"):
    """Coerce to a 1-D int array of 0/1 labels."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional")
    if n_samples is not None and y.shape[0] != n_samples:
        raise ValueError(f"{name} has {y.shape[0]} entries, expected {n_samples}")
    values = np.unique(y)
    if not np.all(np.isin(values, (0, 1))):
        raise ValueError(f"{name} must contain only 0/1 labels, got {values!r}")
    return y.astype(np.int64)


def check_X_y(X, y, n_features=None):
    X = check_matrix(X, n_features=n_features)
    y = check_labels(y, n_samples=X.shape[0])
    return X, y


def check_both_classes(y, name="y"):
    if not (np.any(y == 0) and np.any(y == 1)):
        raise ValueError(
            f"{name} must contain both classes; got only class {int(y[0])}"
        )


def clone(estimator):
    """Fresh unfitted copy with the same constructor parameters."""
    return type(estimator)(**estimator.get_params())


def corpus_fingerprint(X, y=None):
    """Row count plus content hash identifying a training corpus.

    Hashes the raw float64/int64 bytes, so any change to values, order, or
    shape produces a different fingerprint.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    h = hashlib.sha256()
    h.update(str(X.shape).encode())
    h.update(X.tobytes())
    if y is not None:
        y = np.ascontiguousarray(y, dtype=np.int64)
        h.update(y.tobytes())
    return {"n_rows": int(X.shape[0]), "sha256": h.hexdigest()}
