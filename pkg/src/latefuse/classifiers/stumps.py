"""Depth-1 decision stumps trained on weighted data.

A stump assigns one class to each side of a single-feature threshold.
Thresholds are midpoints between consecutive distinct sorted values; the best
class for each side is the weighted majority there, so the search minimizes
weighted 0/1 error over every (feature, threshold, class-pair) candidate.
Ties break to the lowest feature index, then the lowest threshold, then the
lowest class index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SingleClassData


@dataclass(frozen=True)
class DecisionStump:
    feature_index: int
    threshold: float
    left_class: int   # predicted for x[feature] <= threshold
    right_class: int  # predicted for x[feature] >  threshold

    def predict(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.feature_index]
        return np.where(col <= self.threshold, self.left_class, self.right_class)


def train_stump(X: np.ndarray, y: np.ndarray, sample_weights: np.ndarray) -> DecisionStump:
    """Exact weighted-error-minimizing stump via per-feature cumulative scans."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    w = np.asarray(sample_weights, dtype=np.float64)
    if np.any(w < 0) or w.sum() <= 0:
        raise ValueError("sample weights must be nonnegative with positive sum")
    if len(np.unique(y)) < 2:
        raise SingleClassData("stump training needs at least two classes")

    n, d = X.shape
    m = int(y.max()) + 1
    total_w = w.sum()
    class_totals = np.zeros(m)
    np.add.at(class_totals, y, w)

    best = None  # (error, feature, threshold, left_class, right_class)
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        boundaries = np.flatnonzero(xs[:-1] < xs[1:])
        if len(boundaries) == 0:
            continue
        # cum[i, k] = weight of class k among the first i+1 sorted samples
        onehot_w = np.zeros((n, m))
        onehot_w[np.arange(n), y[order]] = w[order]
        cum = np.cumsum(onehot_w, axis=0)
        left = cum[boundaries]
        right = class_totals - left
        left_best = left.max(axis=1)
        right_best = right.max(axis=1)
        errors = total_w - left_best - right_best
        i = int(np.argmin(errors))  # first minimum: lowest threshold wins ties
        err = float(errors[i])
        if best is None or err < best[0]:
            pos = boundaries[i]
            thr = 0.5 * (xs[pos] + xs[pos + 1])
            best = (
                err,
                f,
                float(thr),
                int(np.argmax(left[i])),
                int(np.argmax(right[i])),
            )

    if best is None:
        # every feature is constant; fall back to a majority-vote stump
        majority = int(np.argmax(class_totals))
        return DecisionStump(0, float(X[0, 0]), majority, majority)
    _, f, thr, lc, rc = best
    return DecisionStump(f, thr, lc, rc)


def stump_weighted_error(stump: DecisionStump, X, y, w) -> float:
    pred = stump.predict(np.asarray(X, dtype=np.float64))
    w = np.asarray(w, dtype=np.float64)
    return float(w[pred != np.asarray(y)].sum() / w.sum())
