"""Combination strategies for fusing per-group class confidences.

Five variants: confidence summation and rank summation, each with or without
priority weighting, plus a two-layer (stacking) meta-classifier trained on
the concatenated first-layer probability outputs. The final decision is the
argmax of the combined score vector with ties broken to the lowest class
index, which makes every strategy invariant to positive rescaling of the
priorities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import classifiers
from .core import LabelSpace
from .errors import AllZeroPriorities, EmptyEnsemble

STRATEGY_KINDS = ("confidence_sum", "rank_sum", "stacking")
STACKING_MODES = ("naive", "out_of_fold")


@dataclass(frozen=True)
class EnsembleStrategy:
    """Tagged choice of combination rule.

    ``weighted`` is ignored for stacking; ``stacking_mode`` and
    ``stacking_meta_spec`` must be present exactly when kind is stacking.
    """

    kind: str
    weighted: bool = False
    stacking_mode: Optional[str] = None
    stacking_meta_spec: Optional[classifiers.ClassifierSpec] = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "stacking":
            if self.stacking_mode not in STACKING_MODES:
                raise ValueError(
                    f"stacking_mode must be one of {STACKING_MODES}, "
                    f"got {self.stacking_mode!r}"
                )
            if self.stacking_meta_spec is None:
                raise ValueError("stacking needs a stacking_meta_spec")
        else:
            if self.stacking_mode is not None or self.stacking_meta_spec is not None:
                raise ValueError("stacking fields are only valid for kind='stacking'")

    @property
    def label(self) -> str:
        if self.kind == "stacking":
            return f"stacking_{self.stacking_mode}"
        return f"{self.kind}_weighted" if self.weighted else self.kind

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "weighted": self.weighted}
        if self.kind == "stacking":
            d["stacking_mode"] = self.stacking_mode
            d["stacking_meta_spec"] = self.stacking_meta_spec.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleStrategy":
        meta = d.get("stacking_meta_spec")
        return cls(
            kind=d["kind"],
            weighted=bool(d.get("weighted", False)),
            stacking_mode=d.get("stacking_mode"),
            stacking_meta_spec=(
                classifiers.ClassifierSpec.from_dict(meta) if meta else None
            ),
        )


def assign_ranks(p) -> np.ndarray:
    """Fractional ranks of a confidence vector: the highest probability gets
    rank m, the lowest gets 1, and ties share the mean of the ranks they
    jointly occupy, so the rank sum is always m(m+1)/2."""
    p = np.asarray(p, dtype=np.float64)
    below = (p[:, None] > p[None, :]).sum(axis=1)  # entries strictly below p[i]
    equal = (p[:, None] == p[None, :]).sum(axis=1) - 1  # ties excluding self
    return 1.0 + below + 0.5 * equal


def _combine(vectors_fn, probs: Sequence, priorities, weighted: bool) -> np.ndarray:
    if len(probs) == 0:
        raise EmptyEnsemble("no classifier outputs to combine")
    if weighted:
        w = [float(v) for v in priorities]
        if len(w) != len(probs):
            raise EmptyEnsemble(
                f"{len(probs)} probability vectors but {len(w)} priorities"
            )
        if any(v < 0 or not np.isfinite(v) for v in w):
            raise ValueError("priorities must be finite and nonnegative")
        if all(v == 0.0 for v in w):
            raise AllZeroPriorities(
                "every group priority is zero; the ensemble carries no signal"
            )
    else:
        w = [1.0] * len(probs)
    scores = w[0] * vectors_fn(probs[0])
    for wg, pg in zip(w[1:], probs[1:]):
        scores = scores + wg * vectors_fn(pg)
    return scores


def confidence_sum(probs, priorities, weighted: bool) -> np.ndarray:
    """Sum of the groups' confidence vectors, optionally priority-weighted."""
    return _combine(lambda p: np.asarray(p, dtype=np.float64), probs, priorities, weighted)


def rank_sum(probs, priorities, weighted: bool) -> np.ndarray:
    """Sum of the groups' per-class ranks, optionally priority-weighted."""
    return _combine(assign_ranks, probs, priorities, weighted)


def decide(scores) -> int:
    """Highest combined score wins; ties go to the lowest class index."""
    s = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    return int(np.argmax(s))


def stack_meta_features(groups_probs: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate per-group probability rows into the meta-learner's input
    of width G*m."""
    if len(groups_probs) == 0:
        raise EmptyEnsemble("no first-layer outputs to stack")
    mats = [np.atleast_2d(np.asarray(p, dtype=np.float64)) for p in groups_probs]
    n = mats[0].shape[0]
    for mat in mats:
        if mat.shape[0] != n:
            raise EmptyEnsemble("first-layer outputs disagree on sample count")
    return np.hstack(mats)


def train_stacking(
    groups_probs_train: Sequence[np.ndarray],
    y,
    strategy: EnsembleStrategy,
    labels: LabelSpace,
) -> classifiers.FittedClassifier:
    """Train the second-layer classifier on concatenated first-layer outputs.

    The caller controls what the probability rows are: full-training-set
    predictions for naive stacking, or out-of-fold predictions for the
    leakage-free variant.
    """
    meta_X = stack_meta_features(groups_probs_train)
    return classifiers.train(strategy.stacking_meta_spec, meta_X, y, labels)
