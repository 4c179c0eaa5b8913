"""Shared contract for the probabilistic classifiers.

Every classifier kind trains from (spec, X, y, label_space) and yields a
fitted model whose ``predict_proba`` returns a valid per-class probability
vector for any finite input of the trained width. Fitted models are immutable
and safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import LabelSpace, probability_vector
from ..errors import (
    DimensionMismatch,
    EmptyClass,
    NonFiniteFeature,
    SingleClassData,
    UnknownLabel,
)

KINDS = ("logreg", "linear_svm_ovr", "adaboost_stumps", "random_forest")


@dataclass(frozen=True)
class ClassifierSpec:
    """Classifier kind plus its hyperparameters and RNG seed.

    Only the fields relevant to ``kind`` are used:
      logreg          -- lam (L2 strength)
      linear_svm_ovr  -- c_grid (values searched by internal 3-fold CV)
      adaboost_stumps -- rounds
      random_forest   -- trees, min_leaf
    """

    kind: str
    seed: int = 0
    lam: float = 1e-3
    c_grid: tuple[float, ...] = (0.1, 1.0, 10.0)
    rounds: int = 100
    trees: int = 100
    min_leaf: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.lam <= 0:
            raise ValueError("lam must be > 0")
        if not self.c_grid or any(c <= 0 for c in self.c_grid):
            raise ValueError("c_grid values must be > 0")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.trees < 1:
            raise ValueError("trees must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        object.__setattr__(self, "c_grid", tuple(float(c) for c in self.c_grid))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "lam": self.lam,
            "c_grid": list(self.c_grid),
            "rounds": self.rounds,
            "trees": self.trees,
            "min_leaf": self.min_leaf,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierSpec":
        allowed = {"kind", "seed", "lam", "c_grid", "rounds", "trees", "min_leaf"}
        unknown = set(d) - allowed
        if unknown:
            raise ValueError(f"unknown classifier spec fields: {sorted(unknown)}")
        if "kind" not in d:
            raise ValueError("classifier spec needs a 'kind'")
        kwargs = dict(d)
        if "c_grid" in kwargs:
            kwargs["c_grid"] = tuple(kwargs["c_grid"])
        return cls(**kwargs)


class FittedClassifier:
    """Base for all fitted models: stores spec, label space and input width,
    and provides the argmax prediction rule (ties go to the lowest index)."""

    def __init__(self, spec: ClassifierSpec, label_space: LabelSpace, input_dim: int):
        self.spec = spec
        self.label_space = label_space
        self.input_dim = input_dim

    # subclasses implement: matrix of per-row probabilities
    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_input(self, x) -> tuple[np.ndarray, bool]:
        X = np.asarray(x, dtype=np.float64)
        one_row = X.ndim == 1
        if one_row:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise DimensionMismatch(
                f"expected input width {self.input_dim}, got shape {X.shape}"
            )
        if not np.all(np.isfinite(X)):
            raise NonFiniteFeature("prediction input contains NaN or inf")
        return X, one_row

    def predict_proba(self, x) -> np.ndarray:
        """Per-class probabilities; 1-D input gives a vector, 2-D a matrix."""
        X, one_row = self._check_input(x)
        P = self._proba_matrix(X)
        if one_row:
            return probability_vector(P[0])
        for row in P:
            probability_vector(row)
        P = np.ascontiguousarray(P)
        P.setflags(write=False)
        return P

    def predict(self, x):
        X, one_row = self._check_input(x)
        pred = np.argmax(self._proba_matrix(X), axis=1)
        return int(pred[0]) if one_row else pred

    # persistence hooks; subclasses return/accept plain-JSON state
    def state(self) -> dict:
        raise NotImplementedError


def check_training_data(X, y, labels: LabelSpace) -> tuple[np.ndarray, np.ndarray]:
    """Validate the common training preconditions shared by every kind."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise DimensionMismatch("X must be a 2-D matrix")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(
            f"y has shape {y.shape}, expected ({X.shape[0]},)"
        )
    if not np.all(np.isfinite(X)):
        row, col = np.argwhere(~np.isfinite(X))[0]
        raise NonFiniteFeature(f"non-finite training feature at row {row}, col {col}")
    present = np.unique(y)
    if len(present) < 2:
        raise SingleClassData("training data contains a single class")
    if present.min() < 0 or present.max() >= labels.m:
        raise UnknownLabel(f"labels outside [0, {labels.m})")
    if len(present) != labels.m:
        missing = sorted(set(range(labels.m)) - set(present.tolist()))
        names = [labels.class_names[i] for i in missing]
        raise EmptyClass(f"classes with no training samples: {names}")
    if X.shape[0] < labels.m:
        raise SingleClassData(
            f"need at least m={labels.m} samples, got {X.shape[0]}"
        )
    return X, y
