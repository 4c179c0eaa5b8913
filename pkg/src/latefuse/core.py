"""Domain data model: label spaces, feature groups, multi-view datasets,
stratified splitting, and per-column standardization.

Every sample is described by several aligned feature groups (views). Row i of
every group belongs to ``sample_ids[i]``. All types are immutable after
construction and therefore safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyClass,
    InsufficientClassPopulation,
    MisalignedGroup,
    NonFiniteFeature,
    UnknownLabel,
)

PROB_SUM_TOL = 1e-9
DEGENERATE_STD = 1e-12


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    a = np.ascontiguousarray(values, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LabelSpace:
    """Ordered set of class names; the index in ``class_names`` is the
    canonical class encoding used everywhere downstream."""

    class_names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.class_names)) != len(self.class_names):
            raise ValueError("class names must be unique")
        if len(self.class_names) < 2:
            raise ValueError("a label space needs at least 2 classes")
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def m(self) -> int:
        return len(self.class_names)

    def index(self, name: str) -> int:
        try:
            return self.class_names.index(name)
        except ValueError:
            raise UnknownLabel(f"unknown class name {name!r}") from None

    @classmethod
    def from_names(cls, names) -> "LabelSpace":
        # canonical encoding: lexicographic order, reproducible across runs
        return cls(tuple(sorted(set(names))))


@dataclass(frozen=True)
class GroupView:
    """One feature group: an n x d_g dense matrix plus its name."""

    name: str
    features: np.ndarray

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[1] < 1:
            raise ValueError(
                f"group {self.name!r} must be a 2-D matrix with >= 1 column"
            )
        object.__setattr__(self, "features", _frozen_array(feats))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class MultiViewDataset:
    """Labels plus G aligned feature groups for n samples."""

    label_space: LabelSpace
    labels: np.ndarray
    groups: tuple[GroupView, ...]
    sample_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _frozen_array(self.labels, dtype=np.int64))
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))

    @property
    def n(self) -> int:
        return len(self.sample_ids)

    @property
    def group_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.groups)

    def group(self, name: str) -> GroupView:
        for g in self.groups:
            if g.name == name:
                return g
        raise MisalignedGroup(f"dataset has no group named {name!r}")

    def subset_groups(self, names) -> "MultiViewDataset":
        """Same samples, restricted to the named groups (in the given order)."""
        return MultiViewDataset(
            label_space=self.label_space,
            labels=self.labels,
            groups=tuple(self.group(n) for n in names),
            sample_ids=self.sample_ids,
        )

    def take(self, indices: np.ndarray) -> "MultiViewDataset":
        """Row subset by index, preserving group alignment."""
        idx = np.asarray(indices, dtype=np.int64)
        return MultiViewDataset(
            label_space=self.label_space,
            labels=self.labels[idx],
            groups=tuple(GroupView(g.name, g.features[idx]) for g in self.groups),
            sample_ids=tuple(self.sample_ids[i] for i in idx),
        )


def validate_dataset(d: MultiViewDataset) -> MultiViewDataset:
    """Check every dataset invariant; returns ``d`` unchanged when they hold.

    Raises MisalignedGroup, NonFiniteFeature (with group/row/col address),
    UnknownLabel, or EmptyClass.
    """
    n = d.n
    if len(d.groups) < 1:
        raise MisalignedGroup("dataset has no feature groups")
    if d.labels.shape != (n,):
        raise MisalignedGroup(
            f"labels have length {d.labels.shape[0]}, expected {n}"
        )
    if len(set(d.sample_ids)) != n:
        raise MisalignedGroup("sample_ids contain duplicates")
    for g in d.groups:
        if g.n != n:
            raise MisalignedGroup(
                f"group {g.name!r} has {g.n} rows, expected {n}"
            )
        if not np.all(np.isfinite(g.features)):
            row, col = np.argwhere(~np.isfinite(g.features))[0]
            raise NonFiniteFeature(
                f"non-finite feature in group {g.name!r} at row {row}, col {col}"
            )
    m = d.label_space.m
    if n > 0 and (d.labels.min() < 0 or d.labels.max() >= m):
        bad = d.labels[(d.labels < 0) | (d.labels >= m)][0]
        raise UnknownLabel(f"label index {bad} outside [0, {m})")
    counts = np.bincount(d.labels, minlength=m)
    for i, c in enumerate(counts):
        if c == 0:
            raise EmptyClass(f"class {d.label_space.class_names[i]!r} has no samples")
    return d


@dataclass(frozen=True)
class SplitSpec:
    """Fixed-count stratified split: draw the same number of train and test
    samples from every class, without replacement."""

    train_per_class: int
    test_per_class: int
    seed: int

    def __post_init__(self):
        if self.train_per_class < 1 or self.test_per_class < 1:
            raise ValueError("train_per_class and test_per_class must be >= 1")


def stratified_split(
    d: MultiViewDataset, spec: SplitSpec
) -> tuple[MultiViewDataset, MultiViewDataset]:
    """Deterministic per-class split into disjoint train and test sets."""
    rng = np.random.default_rng(spec.seed)
    need = spec.train_per_class + spec.test_per_class
    train_idx, test_idx = [], []
    for c in range(d.label_space.m):
        members = np.flatnonzero(d.labels == c)
        if len(members) < need:
            raise InsufficientClassPopulation(
                f"class {d.label_space.class_names[c]!r} has {len(members)} "
                f"samples, split needs {need}"
            )
        picked = members[rng.permutation(len(members))]
        train_idx.append(picked[: spec.train_per_class])
        test_idx.append(picked[spec.train_per_class : need])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return d.take(train), d.take(test)


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-score statistics learned from training data.

    Columns whose training stddev is below DEGENERATE_STD map to all zeros so
    constant features cannot blow up downstream classifiers.
    """

    mean: np.ndarray
    scale: np.ndarray  # 1/std for live columns, 0 for degenerate ones

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen_array(self.mean))
        object.__setattr__(self, "scale", _frozen_array(self.scale))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def standardize_fit(train_features: np.ndarray) -> Standardizer:
    X = np.asarray(train_features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("standardize_fit needs a 2-D matrix with >= 2 rows")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std < DEGENERATE_STD, 0.0, 1.0 / np.where(std == 0, 1.0, std))
    return Standardizer(mean=mean, scale=scale)


def standardize_apply(s: Standardizer, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    one_row = X.ndim == 1
    if one_row:
        X = X[None, :]
    if X.shape[1] != s.dim:
        raise DimensionMismatch(
            f"standardizer expects {s.dim} columns, got {X.shape[1]}"
        )
    out = (X - s.mean) * s.scale
    return out[0] if one_row else out


def probability_vector(p) -> np.ndarray:
    """Validate a per-class confidence vector: nonnegative entries summing to
    1 within PROB_SUM_TOL. Returns a read-only float64 array."""
    v = np.asarray(p, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("probability vector must be 1-D")
    if not np.all(np.isfinite(v)):
        raise ValueError("probability vector has non-finite entries")
    if np.any(v < 0):
        raise ValueError(f"negative probability {v.min()}")
    total = float(v.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ValueError(f"probabilities sum to {total}, expected 1")
    return _frozen_array(v)
