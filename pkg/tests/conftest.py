import numpy as np
import pytest

from latefuse.core import GroupView, LabelSpace, MultiViewDataset


def gaussian_blobs(rng, n_per_class, centers):
    """Stacked samples around the given class centers, unit noise."""
    centers = np.asarray(centers, dtype=np.float64)
    m, d = centers.shape
    X = np.vstack([c + rng.standard_normal((n_per_class, d)) for c in centers])
    y = np.repeat(np.arange(m), n_per_class)
    return X, y


def make_dataset(groups, labels, class_names=None):
    """Small helper assembling a MultiViewDataset from raw matrices."""
    labels = np.asarray(labels, dtype=np.int64)
    m = int(labels.max()) + 1
    names = class_names or [f"c{i}" for i in range(m)]
    return MultiViewDataset(
        label_space=LabelSpace(tuple(names)),
        labels=labels,
        groups=tuple(GroupView(name, feats) for name, feats in groups),
        sample_ids=tuple(f"s{i:04d}" for i in range(len(labels))),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def two_blob_dataset(rng):
    """Two groups, 2 classes, well separated in group A, noise in group B."""
    Xa, y = gaussian_blobs(rng, 30, [[0.0, 0.0], [6.0, 6.0]])
    Xb = rng.standard_normal((60, 3))
    return make_dataset([("a", Xa), ("b", Xb)], y)
