"""Command-line interface.

Verbs: train, predict, evaluate, ablate, compare, gen-data. Runs are driven
by a JSON config file (see README for a complete example); ``--seed``
overrides the config seed. Exit codes: 0 success, 1 data error (the message
names the offending file, group, or row), 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import classifiers, dataio, ensemble, evaluation, pipeline, synthdata
from .core import LabelSpace, SplitSpec, stratified_split
from .errors import ConfigError, DataError, LateFuseError


@dataclass
class RunConfig:
    spec: classifiers.ClassifierSpec
    strategy: ensemble.EnsembleStrategy
    k: int
    seed: int
    labels_path: Optional[str]
    group_paths: list[tuple[str, str]]
    test_labels_path: Optional[str] = None
    test_group_paths: list[tuple[str, str]] = field(default_factory=list)
    model_path: Optional[str] = None
    out_path: Optional[str] = None
    subsets: Optional[list[list[str]]] = None
    threads: int = 1


def _data_block(block: dict, where: str) -> tuple[Optional[str], list[tuple[str, str]]]:
    if not isinstance(block, dict):
        raise ConfigError(f"config field {where!r} must be an object")
    groups = block.get("groups")
    if not isinstance(groups, list) or not groups:
        raise ConfigError(f"config field {where}.groups must be a non-empty list")
    group_paths = []
    for i, g in enumerate(groups):
        if not isinstance(g, dict) or "name" not in g or "path" not in g:
            raise ConfigError(
                f"config field {where}.groups[{i}] needs 'name' and 'path'"
            )
        group_paths.append((str(g["name"]), str(g["path"])))
    return block.get("labels"), group_paths


def load_config(path: str, seed_override: Optional[int] = None) -> RunConfig:
    try:
        with open(path, "r") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")
    try:
        spec = classifiers.ClassifierSpec.from_dict(raw.get("classifier", {"kind": "logreg"}))
        strategy = ensemble.EnsembleStrategy.from_dict(
            raw.get("strategy", {"kind": "confidence_sum", "weighted": True})
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"config {path!r}: {exc}") from exc
    k = raw.get("k", 5)
    if not isinstance(k, int) or k < 2:
        raise ConfigError(f"config {path!r}: k must be an integer >= 2, got {k!r}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"config {path!r}: seed must be a nonnegative integer")
    if seed_override is not None:
        seed = seed_override
    labels_path, group_paths = (None, [])
    if "data" in raw:
        labels_path, group_paths = _data_block(raw["data"], "data")
    test_labels, test_groups = (None, [])
    if "test_data" in raw:
        test_labels, test_groups = _data_block(raw["test_data"], "test_data")
    subsets = raw.get("subsets")
    if subsets is not None:
        if not isinstance(subsets, list) or not all(
            isinstance(s, list) and all(isinstance(g, str) for g in s) for s in subsets
        ):
            raise ConfigError(f"config {path!r}: subsets must be a list of name lists")
    return RunConfig(
        spec=spec,
        strategy=strategy,
        k=k,
        seed=seed,
        labels_path=labels_path,
        group_paths=group_paths,
        test_labels_path=test_labels,
        test_group_paths=test_groups,
        model_path=raw.get("model"),
        out_path=raw.get("out"),
        subsets=subsets,
    )


def _require(value, name: str):
    if not value:
        raise ConfigError(f"missing required setting: {name}")
    return value


def _load_train_dataset(cfg: RunConfig):
    labels = _require(cfg.labels_path, "data.labels")
    groups = _require(cfg.group_paths, "data.groups")
    return dataio.load_dataset(labels, groups)


def _load_test_dataset(cfg: RunConfig):
    labels = _require(cfg.test_labels_path, "test_data.labels")
    groups = _require(cfg.test_group_paths, "test_data.groups")
    return dataio.load_dataset(labels, groups)


def cmd_train(args) -> int:
    cfg = load_config(args.config, args.seed)
    model_path = args.model or cfg.model_path
    _require(model_path, "model output path (--model or config 'model')")
    train = _load_train_dataset(cfg)
    e = pipeline.train_ensemble(train, cfg.spec, cfg.strategy, cfg.k, cfg.seed)
    pipeline.save_ensemble(e, model_path)
    print(f"trained on {train.n} samples, {len(train.groups)} groups, "
          f"{train.label_space.m} classes (k={cfg.k}, seed={cfg.seed})")
    for pr in e.priorities:
        print(f"group {pr.group_name} priority {pr.value:.4f}")
    print(f"model written to {model_path}")
    return 0


def cmd_predict(args) -> int:
    cfg = load_config(args.config, args.seed) if args.config else None
    group_paths = cfg.group_paths if cfg else []
    _require(group_paths, "data.groups")
    out_path = args.out or (cfg.out_path if cfg else None)
    _require(out_path, "output path (--out or config 'out')")
    e = pipeline.load_ensemble(args.model)
    groups, ids = dataio.load_groups(group_paths)
    preds = pipeline.predict_groups(e, groups, ids)
    dataio.write_predictions(preds, e.label_space.class_names, out_path)
    print(f"wrote {len(preds)} predictions to {out_path}")
    return 0


def cmd_evaluate(args) -> int:
    pred_by_id = dataio.read_predictions(args.predictions)
    label_by_id = dataio.read_labels(args.labels)
    missing = sorted(set(pred_by_id) - set(label_by_id))
    if missing:
        raise DataError(
            f"labels file {args.labels!r} is missing ids (first: {missing[0]!r})"
        )
    extra = sorted(set(label_by_id) - set(pred_by_id))
    if extra:
        raise DataError(
            f"predictions file {args.predictions!r} is missing ids "
            f"(first: {extra[0]!r})"
        )
    names = sorted(set(label_by_id.values()) | set(pred_by_id.values()))
    space = LabelSpace(tuple(names))
    ids = sorted(label_by_id)
    truth = [space.index(label_by_id[i]) for i in ids]
    decided = [space.index(pred_by_id[i]) for i in ids]
    report = evaluation.evaluate(decided, truth, m=space.m)
    for line in report.lines(space.class_names):
        print(line)
    return 0


def cmd_ablate(args) -> int:
    cfg = load_config(args.config, args.seed)
    train = _load_train_dataset(cfg)
    test = _load_test_dataset(cfg)
    report = evaluation.ablate(
        train, test, cfg.spec, [cfg.strategy], cfg.subsets, cfg.k, cfg.seed
    )
    for line in evaluation.format_rows(report.entries, ["groups", "strategy", "accuracy"]):
        print(line)
    return 0


def cmd_compare(args) -> int:
    cfg = load_config(args.config, args.seed)
    train = _load_train_dataset(cfg)
    test = _load_test_dataset(cfg)
    if args.classifiers:
        rows = evaluation.compare_classifiers(train, test, cfg.strategy, cfg.k, cfg.seed)
        header = ["classifier", "accuracy"]
    else:
        rows = evaluation.compare_strategies(train, test, cfg.spec, cfg.k, cfg.seed)
        header = ["strategy", "accuracy"]
    for line in evaluation.format_rows(rows, header):
        print(line)
    return 0


def _synth_spec_from_json(raw: dict) -> tuple[synthdata.SynthSpec, SplitSpec]:
    views = raw.get("views")
    if not isinstance(views, list) or not views:
        raise ConfigError("gen-data spec needs a non-empty 'views' list")
    try:
        view_specs = tuple(
            synthdata.ViewSpec(
                name=str(v["name"]),
                dim=int(v["dim"]),
                informativeness=float(v["informativeness"]),
                scale=float(v.get("scale", 1.0)),
            )
            for v in views
        )
        spec = synthdata.SynthSpec(
            m=int(raw["m"]),
            n_per_class=int(raw["n_per_class"]),
            views=view_specs,
            separation=float(raw.get("separation", synthdata.DEFAULT_SEPARATION)),
            seed=int(raw.get("seed", 0)),
        )
        split = SplitSpec(
            train_per_class=int(raw["train_per_class"]),
            test_per_class=int(raw["test_per_class"]),
            seed=int(raw.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad gen-data spec: {exc}") from exc
    return spec, split


def cmd_gendata(args) -> int:
    try:
        with open(args.spec, "r") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read spec {args.spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"spec {args.spec!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"spec {args.spec!r} must be a JSON object")
    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
    if raw.get("benchmark") == "default":
        train, test = synthdata.default_benchmark(seed)
    else:
        raw = dict(raw)
        raw["seed"] = seed
        spec, split = _synth_spec_from_json(raw)
        train, test = stratified_split(synthdata.generate(spec), split)
    dataio.write_dataset(train, os.path.join(args.out, "train"))
    dataio.write_dataset(test, os.path.join(args.out, "test"))
    print(
        f"wrote {train.n} train and {test.n} test samples "
        f"({len(train.groups)} groups, {train.label_space.m} classes) to {args.out}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latefuse",
        description="Late-fusion multi-view classification toolkit",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="upper bound on worker threads (execution is "
                        "currently serial; results never depend on this)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an ensemble and write the model file")
    p.add_argument("--config", required=True)
    p.add_argument("--model", help="model output path (overrides config)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("predict", help="predict with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--config", required=True, help="config whose data.groups point at the features")
    p.add_argument("--out", help="predictions output path")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("evaluate", help="score a predictions file against labels")
    p.add_argument("--predictions", required=True)
    p.add_argument("--labels", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("ablate", help="accuracy across nested group subsets")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(fn=cmd_ablate)

    p = sub.add_parser("compare", help="compare ensemble strategies (or classifiers)")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--classifiers", action="store_true",
                   help="compare classifier kinds instead of strategies")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("gen-data", help="generate a synthetic benchmark dataset")
    p.add_argument("--spec", required=True, help="synthetic data spec (JSON)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the spec seed")
    p.set_defaults(fn=cmd_gendata)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LateFuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
