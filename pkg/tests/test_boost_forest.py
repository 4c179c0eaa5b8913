import numpy as np
import pytest

from latefuse.classifiers import (
    ClassifierSpec,
    round_weight,
    stump_weighted_error,
    train,
    train_adaboost,
    train_stump,
)
from latefuse.core import LabelSpace
from latefuse.errors import SingleClassData

from conftest import gaussian_blobs

LABELS2 = LabelSpace(("c0", "c1"))


def brute_force_stump(X, y, w):
    """Independent oracle: enumerate every (feature, midpoint, class pair)."""
    n, d = X.shape
    m = int(y.max()) + 1
    best = None
    for f in range(d):
        values = np.unique(X[:, f])
        for t in 0.5 * (values[:-1] + values[1:]):
            for lc in range(m):
                for rc in range(m):
                    pred = np.where(X[:, f] <= t, lc, rc)
                    err = float(w[pred != y].sum())
                    key = (err, f, t, lc, rc)
                    if best is None or key < best:
                        best = key
    return best


class TestStump:
    def test_separable_midpoint(self):
        X = np.array([[0.0], [0.1], [1.0], [1.1]])
        y = np.array([0, 0, 1, 1])
        s = train_stump(X, y, np.full(4, 0.25))
        assert s.threshold == pytest.approx(0.55)
        assert (s.left_class, s.right_class) == (0, 1)
        assert stump_weighted_error(s, X, y, np.full(4, 0.25)) == 0.0

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            X = rng.standard_normal((10, 2))
            y = rng.integers(0, 3, size=10)
            if len(np.unique(y)) < 2:
                continue
            w = np.ones(10)  # unit weights keep error sums exact
            s = train_stump(X, y, w)
            err, f, t, lc, rc = brute_force_stump(X, y, w)
            assert stump_weighted_error(s, X, y, w) * w.sum() == pytest.approx(err)
            assert (s.feature_index, s.threshold, s.left_class, s.right_class) == (
                f,
                t,
                lc,
                rc,
            )

    def test_all_weight_on_one_sample(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([1, 0, 1, 0])
        w = np.array([0.0, 0.0, 1.0, 0.0])
        s = train_stump(X, y, w)
        assert s.predict(X[2:3])[0] == 1
        assert stump_weighted_error(s, X, y, w) == 0.0

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassData):
            train_stump(np.zeros((4, 1)), np.zeros(4, dtype=int), np.ones(4))


class TestAdaBoost:
    def test_round_weight_formula(self):
        # direct evaluation of the round-weight rule
        assert round_weight(0.1, 2) == pytest.approx(np.log(9), abs=1e-9)
        assert round_weight(0.5, 3) == pytest.approx(np.log(2), abs=1e-9)

    def test_separable_one_round(self):
        X = np.array([[0.0], [0.2], [1.0], [1.2]])
        y = np.array([0, 0, 1, 1])
        model = train_adaboost(ClassifierSpec("adaboost_stumps", rounds=10), X, y, LABELS2)
        assert len(model.stumps) <= 3
        assert float((model.predict(X) == y).mean()) == 1.0

    def test_hopeless_round_rejected(self):
        # identical points with conflicting labels: the best stump errs 0.5
        X = np.zeros((4, 1))
        y = np.array([0, 1, 0, 1])
        model = train_adaboost(ClassifierSpec("adaboost_stumps", rounds=10), X, y, LABELS2)
        assert len(model.stumps) == 0
        np.testing.assert_allclose(model.predict_proba(np.zeros(1)), [0.5, 0.5])

    def test_kept_rounds_have_positive_alpha(self, rng):
        X, y = gaussian_blobs(rng, 30, [[0, 0], [1.5, 0], [0, 1.5]])
        model = train(
            ClassifierSpec("adaboost_stumps", rounds=40),
            X,
            y,
            LabelSpace(("a", "b", "c")),
        )
        assert len(model.alphas) > 0
        assert all(a > 0 for a in model.alphas)

    def test_probabilities_on_simplex(self, rng):
        X, y = gaussian_blobs(rng, 25, [[0, 0], [2, 2], [4, 0]])
        model = train(
            ClassifierSpec("adaboost_stumps", rounds=25), X, y, LabelSpace(("a", "b", "c"))
        )
        P = model.predict_proba(rng.standard_normal((40, 2)) * 3)
        assert np.all(P >= 0)
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-9)

    def test_deterministic(self, rng):
        X, y = gaussian_blobs(rng, 20, [[0, 0], [2, 0]])
        spec = ClassifierSpec("adaboost_stumps", rounds=15)
        m1 = train_adaboost(spec, X, y, LABELS2)
        m2 = train_adaboost(spec, X, y, LABELS2)
        assert m1.stumps == m2.stumps and m1.alphas == m2.alphas


def best_single_stump_accuracy(X, y):
    """Exhaustive stump optimum (oracle for the forest comparison)."""
    err, *_ = brute_force_stump(X, y, np.ones(len(y)))
    return 1.0 - err / len(y)


class TestRandomForest:
    def _xor_data(self, rng, n=30, gap=4.0):
        centers = np.array([[0, 0], [gap, gap], [0, gap], [gap, 0]])
        cls = np.array([0, 0, 1, 1])
        X = np.vstack([c + 0.3 * rng.standard_normal((n, 2)) for c in centers])
        y = np.repeat(cls, n)
        return X, y

    def test_vote_fraction_probabilities(self, rng):
        X, y = gaussian_blobs(rng, 30, [[0, 0], [4, 4]])
        model = train(ClassifierSpec("random_forest", trees=100), X, y, LABELS2)
        P = model.predict_proba(rng.standard_normal((25, 2)) * 3)
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
        votes = P * 100
        np.testing.assert_allclose(votes, np.round(votes), atol=1e-9)

    def test_deterministic_forest(self, rng):
        X, y = gaussian_blobs(rng, 20, [[0, 0], [3, 3]])
        spec = ClassifierSpec("random_forest", seed=4, trees=20)
        m1 = train(spec, X, y, LABELS2)
        m2 = train(spec, X, y, LABELS2)
        assert m1.trees == m2.trees

    def test_beats_best_stump_on_xor(self):
        rng = np.random.default_rng(3)
        X, y = self._xor_data(rng)
        stump_acc = best_single_stump_accuracy(X, y)
        assert stump_acc <= 0.8, "XOR layout must defeat any single stump"
        model = train(ClassifierSpec("random_forest", seed=0, trees=50), X, y, LABELS2)
        forest_acc = float((model.predict(X) == y).mean())
        assert forest_acc > stump_acc

    def test_single_class_rejected(self, rng):
        X = rng.standard_normal((8, 2))
        with pytest.raises(SingleClassData):
            train(ClassifierSpec("random_forest", trees=5), X, np.ones(8, dtype=int), LABELS2)
