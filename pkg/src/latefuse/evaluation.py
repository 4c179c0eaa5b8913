"""Metrics plus the strategy / classifier / group-count comparison harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import classifiers, crossval, ensemble, pipeline
from .core import MultiViewDataset, standardize_apply, standardize_fit, validate_dataset
from .errors import LengthMismatch, UnknownGroupName


@dataclass(frozen=True)
class EvaluationReport:
    """Top-1 accuracy with the full confusion matrix (rows = true class,
    columns = predicted class) and per-class accuracies."""

    accuracy: float
    confusion: np.ndarray
    per_class_accuracy: np.ndarray
    n_test: int

    def lines(self, class_names: Optional[Sequence[str]] = None) -> list[str]:
        out = [f"accuracy {self.accuracy:.4f}"]
        names = class_names or [str(i) for i in range(len(self.per_class_accuracy))]
        for name, acc in zip(names, self.per_class_accuracy):
            out.append(f"class {name} accuracy {acc:.4f}")
        out.append("confusion rows=true cols=predicted")
        for row in self.confusion:
            out.append(",".join(str(int(v)) for v in row))
        return out


def _decided(preds) -> np.ndarray:
    return np.array(
        [p.decided if hasattr(p, "decided") else int(p) for p in preds],
        dtype=np.int64,
    )


def evaluate(preds, truth, m: Optional[int] = None) -> EvaluationReport:
    """Score predictions against ground-truth class indices."""
    decided = _decided(preds)
    truth = np.asarray(truth, dtype=np.int64)
    if len(decided) != len(truth):
        raise LengthMismatch(
            f"{len(decided)} predictions for {len(truth)} ground-truth labels"
        )
    if m is None:
        m = int(max(decided.max(), truth.max())) + 1 if len(truth) else 0
    confusion = np.zeros((m, m), dtype=np.int64)
    np.add.at(confusion, (truth, decided), 1)
    n = len(truth)
    accuracy = float(np.trace(confusion) / n) if n else 0.0
    row_sums = confusion.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        per_class = np.where(
            row_sums > 0, np.diag(confusion) / np.maximum(row_sums, 1), 0.0
        )
    return EvaluationReport(
        accuracy=accuracy,
        confusion=confusion,
        per_class_accuracy=per_class,
        n_test=n,
    )


def evaluate_ensemble(
    e: pipeline.TrainedEnsemble, test: MultiViewDataset
) -> EvaluationReport:
    preds = pipeline.predict(e, test)
    return evaluate(preds, test.labels, m=e.label_space.m)


def five_strategies(meta_spec: classifiers.ClassifierSpec) -> list[ensemble.EnsembleStrategy]:
    """The standard comparison set: both sums with and without weighting,
    plus naive stacking."""
    return [
        ensemble.EnsembleStrategy("confidence_sum", weighted=False),
        ensemble.EnsembleStrategy("confidence_sum", weighted=True),
        ensemble.EnsembleStrategy("rank_sum", weighted=False),
        ensemble.EnsembleStrategy("rank_sum", weighted=True),
        ensemble.EnsembleStrategy(
            "stacking", stacking_mode="naive", stacking_meta_spec=meta_spec
        ),
    ]


def _with_strategy(
    base: pipeline.TrainedEnsemble,
    strategy: ensemble.EnsembleStrategy,
    train: MultiViewDataset,
    spec: classifiers.ClassifierSpec,
    k: int,
    seed: int,
) -> pipeline.TrainedEnsemble:
    """Reuse the base's fitted groups and priorities under another strategy;
    only stacking needs extra training (its meta-classifier)."""
    meta = None
    if strategy.kind == "stacking":
        y = train.labels
        feats = [
            standardize_apply(gm.standardizer, g.features)
            for gm, g in zip(base.per_group, train.groups)
        ]
        if strategy.stacking_mode == "naive":
            probs = [
                gm.classifier.predict_proba(X)
                for gm, X in zip(base.per_group, feats)
            ]
        else:
            probs = pipeline._out_of_fold_probs(
                spec, feats, y, train.label_space, seed + 1
            )
        meta = ensemble.train_stacking(probs, y, strategy, train.label_space)
    fingerprint = pipeline.config_fingerprint(
        spec,
        strategy,
        k,
        seed,
        [(gm.name, gm.classifier.input_dim) for gm in base.per_group],
    )
    return pipeline.TrainedEnsemble(
        per_group=base.per_group,
        priorities=base.priorities,
        strategy=strategy,
        meta=meta,
        label_space=base.label_space,
        config_fingerprint=fingerprint,
    )


def compare_strategies(
    train: MultiViewDataset,
    test: MultiViewDataset,
    spec: classifiers.ClassifierSpec,
    k: int = 5,
    seed: int = 0,
    meta_spec: Optional[classifiers.ClassifierSpec] = None,
) -> list[tuple[str, float]]:
    """Accuracy of all five strategies sharing one set of per-group
    classifiers and priorities."""
    validate_dataset(train)
    validate_dataset(test)
    meta_spec = meta_spec or spec
    base = pipeline.train_ensemble(
        train, spec, ensemble.EnsembleStrategy("confidence_sum", weighted=True), k, seed
    )
    rows = []
    for strategy in five_strategies(meta_spec):
        e = _with_strategy(base, strategy, train, spec, k, seed)
        rows.append((strategy.label, evaluate_ensemble(e, test).accuracy))
    return rows


def compare_classifiers(
    train: MultiViewDataset,
    test: MultiViewDataset,
    strategy: ensemble.EnsembleStrategy,
    k: int = 5,
    seed: int = 0,
    specs: Optional[Sequence[classifiers.ClassifierSpec]] = None,
) -> list[tuple[str, float]]:
    """One row per classifier kind under a fixed ensemble strategy."""
    validate_dataset(train)
    validate_dataset(test)
    if specs is None:
        specs = [classifiers.ClassifierSpec(kind, seed=seed) for kind in classifiers.KINDS]
    rows = []
    for spec in specs:
        e = pipeline.train_ensemble(train, spec, strategy, k, seed)
        rows.append((spec.kind, evaluate_ensemble(e, test).accuracy))
    return rows


@dataclass(frozen=True)
class AblationReport:
    """Accuracy per (group subset, strategy); the full-group subset is
    always present."""

    entries: tuple[tuple[tuple[str, ...], str, float], ...]
    all_groups: tuple[str, ...]

    def __post_init__(self):
        full = tuple(self.all_groups)
        if not any(tuple(subset) == full for subset, _, _ in self.entries):
            raise ValueError("ablation must include the full group subset")


def nested_subsets(ordered_names: Sequence[str]) -> list[tuple[str, ...]]:
    """Prefix subsets of sizes 1..G of the given ordering."""
    return [tuple(ordered_names[: i + 1]) for i in range(len(ordered_names))]


def ablate(
    train: MultiViewDataset,
    test: MultiViewDataset,
    spec: classifiers.ClassifierSpec,
    strategies: Sequence[ensemble.EnsembleStrategy],
    subset_plan: Optional[Sequence[Sequence[str]]] = None,
    k: int = 5,
    seed: int = 0,
) -> AblationReport:
    """Train and evaluate one ensemble per (group subset, strategy).

    Without an explicit plan, subsets are nested prefixes of the groups
    ordered by their priority on the full training set (most informative
    first), and the full set is always evaluated.

    Training is deterministic and groups train independently, so a group's
    fitted classifier and priority are identical in every subset containing
    it; they are computed once and reused.
    """
    validate_dataset(train)
    validate_dataset(test)
    names = train.group_names
    y = train.labels
    labels = train.label_space
    fold_plan = crossval.make_folds(y, k, seed)

    cache: dict[str, tuple] = {}

    def fitted(name: str):
        if name not in cache:
            g = train.group(name)
            s = standardize_fit(g.features)
            X = standardize_apply(s, g.features)
            model = classifiers.train(spec, X, y, labels)
            pr = crossval.group_priority(spec, X, y, labels, fold_plan, group_name=name)
            cache[name] = (pipeline.GroupModel(name, s, model), pr, X)
        return cache[name]

    if subset_plan is None:
        order = sorted(
            range(len(names)), key=lambda i: (-fitted(names[i])[1].value, names[i])
        )
        subset_plan = nested_subsets([names[i] for i in order])
    plan: list[tuple[str, ...]] = []
    for subset in subset_plan:
        subset = tuple(subset)
        if len(subset) == 0:
            raise UnknownGroupName("empty group subset")
        for g in subset:
            if g not in names:
                raise UnknownGroupName(f"unknown group {g!r} in subset plan")
        plan.append(subset)
    full = tuple(sorted(names))
    if not any(tuple(sorted(s)) == full for s in plan):
        plan.append(names)

    entries = []
    for subset in plan:
        sub_test = test.subset_groups(subset)
        group_models = tuple(fitted(n)[0] for n in subset)
        priorities = tuple(fitted(n)[1] for n in subset)
        for strategy in strategies:
            meta = None
            if strategy.kind == "stacking":
                feats = [fitted(n)[2] for n in subset]
                if strategy.stacking_mode == "naive":
                    probs = [gm.classifier.predict_proba(X)
                             for gm, X in zip(group_models, feats)]
                else:
                    probs = pipeline._out_of_fold_probs(spec, feats, y, labels, seed + 1)
                meta = ensemble.train_stacking(probs, y, strategy, labels)
            e = pipeline.TrainedEnsemble(
                per_group=group_models,
                priorities=priorities,
                strategy=strategy,
                meta=meta,
                label_space=labels,
                config_fingerprint=pipeline.config_fingerprint(
                    spec, strategy, k, seed,
                    [(gm.name, gm.classifier.input_dim) for gm in group_models],
                ),
            )
            acc = evaluate_ensemble(e, sub_test).accuracy
            entries.append((subset, strategy.label, acc))
    # normalize the recorded full subset to the dataset's group order
    normalized = tuple(
        (names if tuple(sorted(s)) == full else s, label, acc)
        for s, label, acc in entries
    )
    return AblationReport(entries=normalized, all_groups=names)


def format_rows(rows: Sequence[tuple], header: Sequence[str]) -> list[str]:
    """Serialize comparison/ablation rows: one CSV record per row, accuracy
    to 4 decimals."""
    out = [",".join(header)]
    for row in rows:
        *keys, acc = row
        cells = ["+".join(k) if isinstance(k, tuple) else str(k) for k in keys]
        out.append(",".join(cells + [f"{acc:.4f}"]))
    return out
