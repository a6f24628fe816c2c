"""Majority-vote ensemble over the five base classifiers.

All members train on the identical corpus; a shared standardizer is fitted
once and applied only to the distance/margin members (knn, logreg, svm).
Exactly five members keep the vote odd, so a majority always exists. The
positive label wins with 3 or more of the 5 votes.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .base import (
    ParamsMixin,
    check_both_classes,
    check_is_fitted,
    check_matrix,
    check_X_y,
    corpus_fingerprint,
)
from .learners import (
    C45Tree,
    GaussianNaiveBayes,
    KNNClassifier,
    LogisticRegressionGD,
    PegasosSVM,
)
from .preprocessing import Standardizer

MEMBER_KINDS = ("c45", "knn", "logreg", "nb", "svm")
SCALED_KINDS = frozenset({"knn", "logreg", "svm"})

TYPE_BY_KIND = {
    "c45": C45Tree,
    "knn": KNNClassifier,
    "logreg": LogisticRegressionGD,
    "nb": GaussianNaiveBayes,
    "svm": PegasosSVM,
}
KIND_BY_TYPE = {cls: kind for kind, cls in TYPE_BY_KIND.items()}

ENSEMBLE_VERSION = 1


class Member(NamedTuple):
    name: str
    estimator: object
    uses_standardizer: bool


def default_members(seed=0, member_params=None):
    """The canonical five members, optionally with per-kind parameter overrides.

    ``member_params`` maps a member kind to a dict of constructor overrides,
    e.g. ``{"knn": {"k": 7}}``. The svm inherits ``seed`` unless overridden.
    """
    overrides = dict(member_params or {})
    unknown = set(overrides) - set(MEMBER_KINDS)
    if unknown:
        raise ValueError(f"unknown member kinds in overrides: {sorted(unknown)}")
    estimators = {
        "c45": C45Tree(**overrides.get("c45", {})),
        "knn": KNNClassifier(**overrides.get("knn", {})),
        "logreg": LogisticRegressionGD(**overrides.get("logreg", {})),
        "nb": GaussianNaiveBayes(**overrides.get("nb", {})),
        "svm": PegasosSVM(**{"seed": seed, **overrides.get("svm", {})}),
    }
    return [
        Member(name=kind, estimator=estimators[kind], uses_standardizer=kind in SCALED_KINDS)
        for kind in MEMBER_KINDS
    ]


class MajorityVoteEnsemble(ParamsMixin):
    """Five classifiers voting; 3 or more positive votes predict DGA.

    By default the members are the canonical five (c45, knn, logreg, nb,
    svm). A custom ``members`` list of Member tuples (or (name, estimator)
    pairs) may be injected, mainly to test the vote rule in isolation; each
    member's ``uses_standardizer`` flag decides whether it sees standardized
    or raw inputs, defaulting to the ``SCALED_KINDS`` convention for pairs.
    """

    def __init__(self, seed=0, member_params=None, members=None):
        self.seed = seed
        self.member_params = member_params
        self.members = members

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        check_both_classes(y)
        if self.members is not None:
            named = [
                entry if isinstance(entry, Member)
                else Member(entry[0], entry[1], entry[0] in SCALED_KINDS)
                for entry in self.members
            ]
        else:
            named = default_members(self.seed, self.member_params)
        if len(named) != 5:
            raise ValueError(f"ensemble needs exactly 5 members, got {len(named)}")
        names = [m.name for m in named]
        if len(set(names)) != 5:
            raise ValueError(f"member names must be unique, got {names}")

        fingerprint = corpus_fingerprint(X, y)
        scaler = Standardizer().fit(X)
        Xs = scaler.transform(X)
        fitted = []
        for name, estimator, scaled in named:
            try:
                estimator.fit(Xs if scaled else X, y)
            except Exception as exc:
                raise RuntimeError(f"training ensemble member {name!r} failed: {exc}") from exc
            # all members advertise the raw corpus they were jointly trained on
            estimator.fingerprint_ = fingerprint
            fitted.append(Member(name=name, estimator=estimator, uses_standardizer=scaled))
        self.standardizer_ = scaler
        self.members_ = fitted
        self.fingerprint_ = fingerprint
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1], dtype=np.int64)
        self.version_ = ENSEMBLE_VERSION
        return self

    def vote_matrix(self, X):
        """Per-member 0/1 predictions, one column per member in member order."""
        check_is_fitted(self, "members_")
        X = check_matrix(X, n_features=self.n_features_in_)
        Xs = self.standardizer_.transform(X)
        votes = np.empty((X.shape[0], len(self.members_)), dtype=np.int64)
        for col, member in enumerate(self.members_):
            votes[:, col] = member.estimator.predict(Xs if member.uses_standardizer else X)
        return votes

    def predict(self, X):
        votes = self.vote_matrix(X)
        return (2 * votes.sum(axis=1) > len(self.members_)).astype(np.int64)

    def predict_with_votes(self, X):
        """Labels plus the vote breakdown: (labels, votes, member_names)."""
        votes = self.vote_matrix(X)
        labels = (2 * votes.sum(axis=1) > len(self.members_)).astype(np.int64)
        return labels, votes, [m.name for m in self.members_]

    def member_names(self):
        check_is_fitted(self, "members_")
        return [m.name for m in self.members_]

    def member_predict(self, name, X):
        """Prediction of a single member, applying the shared scaler if it uses it."""
        check_is_fitted(self, "members_")
        X = check_matrix(X, n_features=self.n_features_in_)
        for member in self.members_:
            if member.name == name:
                if member.uses_standardizer:
                    X = self.standardizer_.transform(X)
                return member.estimator.predict(X)
        raise KeyError(f"no ensemble member named {name!r}")

    def get_state(self):
        check_is_fitted(self, "members_")
        members = []
        for m in self.members_:
            kind = KIND_BY_TYPE.get(type(m.estimator))
            if kind is None:
                raise TypeError(
                    f"member {m.name!r} of type {type(m.estimator).__name__} "
                    "is not serializable"
                )
            members.append(
                {
                    "name": m.name,
                    "kind": kind,
                    "uses_standardizer": m.uses_standardizer,
                    "params": m.estimator.get_params(),
                    "state": m.estimator.get_state(),
                }
            )
        return {
            "version": self.version_,
            "n_features_in": int(self.n_features_in_),
            "fingerprint": self.fingerprint_,
            "standardizer": {
                "params": self.standardizer_.get_params(),
                "state": self.standardizer_.get_state(),
            },
            "members": members,
        }

    def set_state(self, state):
        scaler = Standardizer(**state["standardizer"]["params"])
        scaler.set_state(state["standardizer"]["state"])
        members = []
        for entry in state["members"]:
            estimator = TYPE_BY_KIND[entry["kind"]](**entry["params"])
            estimator.set_state(entry["state"])
            estimator.fingerprint_ = state["fingerprint"]
            members.append(
                Member(
                    name=entry["name"],
                    estimator=estimator,
                    uses_standardizer=entry["uses_standardizer"],
                )
            )
        self.standardizer_ = scaler
        self.members_ = members
        self.fingerprint_ = state["fingerprint"]
        self.n_features_in_ = state["n_features_in"]
        self.classes_ = np.array([0, 1], dtype=np.int64)
        self.version_ = state["version"]
        return self
