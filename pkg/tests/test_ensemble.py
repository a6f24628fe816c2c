import itertools

import numpy as np
import pytest

from domainsift.base import NotFittedError, ParamsMixin
from domainsift.ensemble import (
    MEMBER_KINDS,
    SCALED_KINDS,
    MajorityVoteEnsemble,
    Member,
    default_members,
)


class ConstantVoter(ParamsMixin):
    """Stub member that always votes its configured label."""

    def __init__(self, vote=0):
        self.vote = vote

    def fit(self, X, y):
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        return np.full(X.shape[0], self.vote, dtype=np.int64)

    def get_state(self):
        return {"vote": self.vote}

    def set_state(self, state):
        self.vote = state["vote"]
        return self


class FailingLearner(ParamsMixin):
    def fit(self, X, y):
        raise ValueError("synthetic failure")

    def predict(self, X):  # pragma: no cover
        return np.zeros(X.shape[0], dtype=np.int64)


def stub_members(votes):
    return [Member(f"m{i}", ConstantVoter(vote=v), False) for i, v in enumerate(votes)]


@pytest.fixture(scope="module")
def fitted(request):
    from conftest import make_blobs

    X, y = make_blobs(n_per_class=40, seed=7)
    return MajorityVoteEnsemble(seed=0).fit(X, y), X, y


class TestMembers:
    def test_default_member_kinds(self):
        members = default_members()
        assert tuple(m.name for m in members) == MEMBER_KINDS
        for m in members:
            assert m.uses_standardizer == (m.name in SCALED_KINDS)

    def test_member_params_forwarded(self):
        members = default_members(member_params={"knn": {"k": 3}})
        knn = next(m for m in members if m.name == "knn")
        assert knn.estimator.k == 3

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="bogus"):
            default_members(member_params={"bogus": {}})


class TestVoting:
    def test_all_32_vote_patterns(self):
        # oracle: popcount >= 3 -> DGA
        X = np.zeros((1, 2))
        y_any = np.array([0, 1])
        X_fit = np.zeros((2, 2))
        for pattern in itertools.product((0, 1), repeat=5):
            ens = MajorityVoteEnsemble(members=stub_members(pattern)).fit(X_fit, y_any)
            want = 1 if sum(pattern) >= 3 else 0
            assert ens.predict(X)[0] == want, pattern

    def test_vote_matrix_columns_match_members(self, fitted):
        ens, X, y = fitted
        votes = ens.vote_matrix(X[:10])
        assert votes.shape == (10, 5)
        for j, name in enumerate(ens.member_names()):
            np.testing.assert_array_equal(votes[:, j], ens.member_predict(name, X[:10]))

    def test_predict_with_votes_consistent(self, fitted):
        ens, X, y = fitted
        labels, votes, names = ens.predict_with_votes(X[:20])
        assert names == list(MEMBER_KINDS)
        np.testing.assert_array_equal(labels, (votes.sum(axis=1) >= 3).astype(np.int64))
        np.testing.assert_array_equal(labels, ens.predict(X[:20]))


class TestFit:
    def test_accuracy_on_blobs(self, fitted):
        ens, X, y = fitted
        assert (ens.predict(X) == y).mean() >= 0.95

    def test_fingerprint_identical_across_members(self, fitted):
        ens, X, y = fitted
        prints = {m.estimator.fingerprint_["sha256"] for m in ens.members_}
        assert prints == {ens.fingerprint_["sha256"]}

    def test_fingerprint_is_raw_not_scaled(self, fitted):
        from domainsift.base import corpus_fingerprint

        ens, X, y = fitted
        assert ens.fingerprint_["sha256"] == corpus_fingerprint(X, y)["sha256"]

    def test_scaled_members_see_standardized_features(self, fitted):
        ens, X, y = fitted
        # knn stores its training matrix; it must be the standardized one
        knn = next(m.estimator for m in ens.members_ if m.name == "knn")
        np.testing.assert_allclose(knn.X_, ens.standardizer_.transform(X), atol=1e-12)

    def test_member_failure_names_member(self):
        members = stub_members((0, 0, 0, 0)) + [Member("boom", FailingLearner(), False)]
        with pytest.raises(RuntimeError, match="boom"):
            MajorityVoteEnsemble(members=members).fit(np.zeros((4, 2)),
                                                      np.array([0, 1, 0, 1]))

    def test_requires_exactly_five_members(self):
        with pytest.raises(ValueError, match="5"):
            MajorityVoteEnsemble(members=stub_members((0, 1, 0))).fit(
                np.zeros((2, 2)), np.array([0, 1])
            )

    def test_duplicate_member_names_rejected(self):
        members = [Member("same", ConstantVoter(), False) for _ in range(5)]
        with pytest.raises(ValueError, match="unique"):
            MajorityVoteEnsemble(members=members).fit(np.zeros((2, 2)), np.array([0, 1]))

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="both classes"):
            MajorityVoteEnsemble().fit(np.zeros((3, 2)), np.zeros(3, dtype=np.int64))

    def test_unknown_member_name_in_predict(self, fitted):
        ens, X, y = fitted
        with pytest.raises(KeyError):
            ens.member_predict("nope", X)

    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            MajorityVoteEnsemble().predict(np.zeros((1, 2)))


class TestDeterminismAndState:
    def test_same_seed_same_model(self):
        from conftest import make_blobs

        X, y = make_blobs(n_per_class=30, seed=2)
        a = MajorityVoteEnsemble(seed=5).fit(X, y)
        b = MajorityVoteEnsemble(seed=5).fit(X, y)
        assert a.get_state() == b.get_state()

    def test_state_roundtrip_predictions(self, fitted, rng):
        ens, X, y = fitted
        clone = MajorityVoteEnsemble(**ens.get_params())
        clone.set_state(ens.get_state())
        Q = rng.normal(size=(50, X.shape[1])) * X.std(axis=0) + X.mean(axis=0)
        np.testing.assert_array_equal(ens.predict(Q), clone.predict(Q))
        np.testing.assert_array_equal(ens.vote_matrix(Q), clone.vote_matrix(Q))

    def test_stub_members_not_serializable(self):
        ens = MajorityVoteEnsemble(members=stub_members((0, 0, 0, 1, 1)))
        ens.fit(np.zeros((2, 2)), np.array([0, 1]))
        with pytest.raises(TypeError):
            ens.get_state()
