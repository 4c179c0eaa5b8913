"""Deterministic synthetic multi-view benchmark data.

Each view draws one Gaussian class mean per class, then emits samples as
informativeness * class_mean + unit noise, all multiplied by the view's
scale. Informativeness 0 makes a view carry no class signal at all;
``separation`` scales the distance between class means. Everything is a pure
function of the spec's seed, so identical specs regenerate identical
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GroupView,
    LabelSpace,
    MultiViewDataset,
    SplitSpec,
    stratified_split,
    validate_dataset,
)
from .errors import BadSpec

DEFAULT_SEPARATION = 1.0


@dataclass(frozen=True)
class ViewSpec:
    name: str
    dim: int
    informativeness: float
    scale: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise BadSpec(f"view {self.name!r}: dim must be >= 1")
        if not 0.0 <= self.informativeness <= 1.0:
            raise BadSpec(f"view {self.name!r}: informativeness outside [0, 1]")
        if self.scale <= 0:
            raise BadSpec(f"view {self.name!r}: scale must be > 0")


@dataclass(frozen=True)
class SynthSpec:
    m: int
    n_per_class: int
    views: tuple[ViewSpec, ...]
    separation: float = DEFAULT_SEPARATION
    seed: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise BadSpec("need at least 2 classes")
        if self.n_per_class < 1:
            raise BadSpec("n_per_class must be >= 1")
        if len(self.views) < 1:
            raise BadSpec("need at least one view")
        if len({v.name for v in self.views}) != len(self.views):
            raise BadSpec("view names must be unique")
        if self.separation < 0:
            raise BadSpec("separation must be >= 0")
        object.__setattr__(self, "views", tuple(self.views))


def generate(spec: SynthSpec) -> MultiViewDataset:
    """Sample a dataset; class c occupies rows [c*n_per_class, (c+1)*n_per_class)."""
    rng = np.random.default_rng(spec.seed)
    n = spec.m * spec.n_per_class
    labels = np.repeat(np.arange(spec.m), spec.n_per_class)
    groups = []
    for view in spec.views:
        means = spec.separation * rng.standard_normal((spec.m, view.dim))
        noise = rng.standard_normal((n, view.dim))
        feats = view.scale * (view.informativeness * means[labels] + noise)
        groups.append(GroupView(view.name, feats))
    label_space = LabelSpace(tuple(f"class_{i:02d}" for i in range(spec.m)))
    ids = tuple(f"s{i:05d}" for i in range(n))
    return validate_dataset(
        MultiViewDataset(
            label_space=label_space, labels=labels, groups=tuple(groups), sample_ids=ids
        )
    )


def default_benchmark(seed: int) -> tuple[MultiViewDataset, MultiViewDataset]:
    """The fixed 6-class, 4-view recipe behind the qualitative benchmarks.

    Two strongly informative views, one weak view, and one pure-noise view
    whose scale is 100x the others to stress naive feature concatenation.
    60 train and 20 test samples per class, split stratified.
    """
    spec = SynthSpec(
        m=6,
        n_per_class=80,
        views=(
            ViewSpec("informative_a", 20, 0.9),
            ViewSpec("informative_b", 20, 0.9),
            ViewSpec("weak", 20, 0.4),
            ViewSpec("noise", 20, 0.0, scale=100.0),
        ),
        separation=DEFAULT_SEPARATION,
        seed=seed,
    )
    full = generate(spec)
    return stratified_split(full, SplitSpec(train_per_class=60, test_per_class=20, seed=seed))
