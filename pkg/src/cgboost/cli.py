"""Command-line interface: train, predict, evaluate, grid, benchmark,
generate and inspect subcommands."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

import numpy as np

from . import boosting, data, metrics, model_io, search, tree
from .boosting import TrainConfig, CONDENSED, PER_CLASS
from .data import CLASSIFICATION, REGRESSION

_MODE_FLAGS = {"condensed": CONDENSED, "per-class": PER_CLASS}


class CliError(ValueError):
    pass


def _add_data_args(p, require_target=True):
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--schema-target", default=None,
                   help="comma-separated target column names or indices")
    p.add_argument("--task", choices=[CLASSIFICATION, REGRESSION],
                   default=CLASSIFICATION)
    p.add_argument("--no-header", action="store_true",
                   help="treat the first row as data")
    p.add_argument("--delimiter", default=",")
    p.require_target = require_target


def _add_config_args(p):
    p.add_argument("--mode", choices=sorted(_MODE_FLAGS), default="condensed")
    p.add_argument("--trees", type=int, default=100, help="boosting iterations")
    p.add_argument("--depth", type=int, default=-1,
                   help="max tree depth (-1 = unlimited)")
    p.add_argument("--lr", type=float, default=0.1, help="learning rate")
    p.add_argument("--subsample", type=float, default=1.0)
    p.add_argument("--max-features", choices=["all", "sqrt"], default="all")
    p.add_argument("--min-samples-split", type=int, default=2)
    p.add_argument("--min-samples-leaf", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def _load(args) -> data.Dataset:
    if args.schema_target is None:
        targets = [-1]
    else:
        targets = [t.strip() for t in args.schema_target.split(",") if t.strip()]
    return data.load_csv(args.data, targets, args.task,
                         has_header=not args.no_header,
                         delimiter=args.delimiter)


def _config(args) -> TrainConfig:
    return TrainConfig(
        n_stages=args.trees, learning_rate=args.lr, max_depth=args.depth,
        subsample=args.subsample, max_features=args.max_features,
        min_samples_split=args.min_samples_split,
        min_samples_leaf=args.min_samples_leaf,
        seed=args.seed, mode=_MODE_FLAGS[args.mode],
    )


def cmd_train(args) -> int:
    ds = _load(args)
    model = boosting.fit(ds, _config(args))
    model_io.save_model(model, args.model_out)
    print(f"trained {model.n_stages} stages ({model.n_trees} trees), "
          f"mode={model.mode}, loss={model.loss}")
    print(f"final training loss: {boosting.training_loss(model, ds):.6f}")
    print(f"model written to {args.model_out}")
    return 0


def cmd_predict(args) -> int:
    model = model_io.load_model(args.model_in)
    X = _load_features_only(args, model)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        if model.task == CLASSIFICATION:
            proba = boosting.predict_proba(model, X)
            labels = np.argmax(proba, axis=1)
            w.writerow(["label"] + [f"p_{c}" for c in model.class_names])
            for i in range(proba.shape[0]):
                w.writerow([model.class_names[labels[i]]]
                           + [repr(float(p)) for p in proba[i]])
        else:
            pred = boosting.predict(model, X)
            w.writerow(list(model.target_names))
            for row in pred:
                w.writerow([repr(float(v)) for v in row])
    print(f"predictions written to {args.out}")
    return 0


def _load_features_only(args, model) -> np.ndarray:
    """Feature matrix from a CSV that may or may not carry target columns."""
    if args.schema_target is not None:
        return _load(args).features
    # no targets declared: every column is a feature
    rows = []
    with open(args.data, newline="") as fh:
        reader = csv.reader(fh, delimiter=args.delimiter)
        for r in reader:
            if r:
                rows.append(r)
    if not args.no_header:
        rows = rows[1:]
    try:
        X = np.array([[float(v) for v in r] for r in rows])
    except ValueError as e:
        raise CliError(f"non-numeric feature value: {e}") from None
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise CliError(f"expected {model.n_features} feature columns")
    return X


def cmd_evaluate(args) -> int:
    model = model_io.load_model(args.model_in)
    ds = _load(args)
    if ds.task != model.task:
        raise CliError(f"model task {model.task!r} does not match data task "
                       f"{ds.task!r}")
    pred = boosting.predict(model, ds.features)
    if ds.task == CLASSIFICATION:
        if ds.n_outputs != model.n_outputs:
            raise CliError(f"model has {model.n_outputs} classes, data has "
                           f"{ds.n_outputs}")
        report = metrics.evaluate_classification(ds.labels, pred,
                                                 model.class_names)
    else:
        if ds.targets.shape[1] != model.n_outputs:
            raise CliError(f"model has {model.n_outputs} targets, data has "
                           f"{ds.targets.shape[1]}")
        report = metrics.evaluate_regression(ds.targets, pred,
                                             model.target_names)
    print(report.format())
    return 0


def cmd_grid(args) -> int:
    ds = _load(args)
    grid = search.PRESETS[args.grid_preset]
    result = search.grid_search(ds, grid, _config(args),
                                folds=args.folds, seed=args.seed)
    print(f"{'depth':>6} {'lr':>6} {'features':>8} {'subsample':>9} {'score':>10}")
    for cfg, mean, detail in result.rows:
        score = f"{mean:.4f}" if mean is not None else f"failed: {detail}"
        print(f"{cfg.max_depth:>6} {cfg.learning_rate:>6} "
              f"{cfg.max_features:>8} {cfg.subsample:>9} {score:>10}")
    b = result.best_config
    print(f"best: depth={b.max_depth} lr={b.learning_rate} "
          f"features={b.max_features} subsample={b.subsample} "
          f"score={result.best_score:.4f}")
    if args.model_out:
        model_io.save_model(result.model, args.model_out)
        print(f"winning model written to {args.model_out}")
    return 0


def cmd_benchmark(args) -> int:
    ds = _load(args)
    reports = search.run_benchmark(ds, _config(args), repeat=args.repeat,
                                   dataset_id=args.data)
    for r in reports:
        print(f"mode={r.mode} training_seconds={r.training_seconds:.3f} "
              f"prediction_seconds_per_1e5={r.prediction_seconds_per_1e5:.3f}")
    return 0


def cmd_generate(args) -> int:
    ds = data.make_blobs(args.n, args.classes, args.features,
                         cluster_std=args.std, seed=args.seed)
    data.save_csv(ds, args.out)
    print(f"wrote {ds.n_rows} rows, {ds.n_outputs} classes to {args.out}")
    return 0


def cmd_inspect(args) -> int:
    model = model_io.load_model(args.model_in)
    if not 0 <= args.stage < model.n_stages:
        raise CliError(f"stage {args.stage} out of range "
                       f"(model has {model.n_stages})")
    stage = model.stages[args.stage]
    for j, t in enumerate(stage):
        if len(stage) > 1:
            print(f"tree for output {j}:")
        print(tree.dump_tree(t))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgboost",
                                description="Condensed gradient boosting")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a model on a CSV dataset")
    _add_data_args(t)
    _add_config_args(t)
    t.add_argument("--model-out", required=True)
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="write predictions for a CSV")
    _add_data_args(pr, require_target=False)
    pr.add_argument("--model-in", required=True)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="report metrics on labeled data")
    _add_data_args(ev)
    ev.add_argument("--model-in", required=True)
    ev.set_defaults(func=cmd_evaluate)

    g = sub.add_parser("grid", help="cross-validated grid search")
    _add_data_args(g)
    _add_config_args(g)
    g.add_argument("--folds", type=int, default=2)
    g.add_argument("--grid-preset", choices=sorted(search.PRESETS),
                   default="lite")
    g.add_argument("--model-out", default=None)
    g.set_defaults(func=cmd_grid)

    b = sub.add_parser("benchmark",
                       help="time condensed vs per-class training")
    _add_data_args(b)
    _add_config_args(b)
    b.add_argument("--repeat", type=int, default=1)
    b.set_defaults(func=cmd_benchmark)

    ge = sub.add_parser("generate", help="write a synthetic blob dataset")
    ge.add_argument("--n", type=int, default=1200)
    ge.add_argument("--classes", type=int, default=3)
    ge.add_argument("--features", type=int, default=2)
    ge.add_argument("--std", type=float, default=1.0)
    ge.add_argument("--seed", type=int, default=0)
    ge.add_argument("--out", required=True)
    ge.set_defaults(func=cmd_generate)

    i = sub.add_parser("inspect", help="dump the trees of one stage")
    i.add_argument("--model-in", required=True)
    i.add_argument("--stage", type=int, default=0)
    i.set_defaults(func=cmd_inspect)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
