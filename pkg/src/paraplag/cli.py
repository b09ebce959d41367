"""Command-line front end.

Five commands share one flat JSON config file:

  score     features + verdict for one suspect/source file pair
  evaluate  stratified cross-validation over a labelled corpus
  baseline  tiling-containment threshold rule over the same corpora
  fit       train a classifier on a corpus and save the model JSON
  crossval  cross-validation replayed from a saved feature table

Exit codes: 0 success, 2 usage or config error, 3 missing resources.
All randomness flows from one seed (config `seed`, overridable with
--seed), so equal invocations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import random
import sys
from typing import Optional, Sequence

from .classify import (
    EvalReport,
    cross_validate,
    fit_classifier,
    load_model,
    passage_features,
    predict_classifier,
    report_to_json,
    save_model,
)
from .config import (
    ConfigError,
    EngineConfig,
    MissingResource,
    build_stores,
    classifier_spec,
    feature_params,
    load_config,
    prep_config,
)
from .corpus import (
    NOT_PARAPHRASED,
    PARAPHRASED,
    LabelledPair,
    load_clough_stevenson,
    load_crowd,
    load_pairs_jsonl,
)
from .engine import (
    baseline_containments,
    baseline_csv_rows,
    extract_features,
    labelled_dataset,
    pair_traces,
    read_feature_csv,
    threshold_report,
    write_feature_csv,
)
from .errors import ParaplagError

CORPUS_KINDS = ("crowd", "cs", "jsonl")


def _read_text_file(path) -> str:
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            return fh.read()
    except OSError as exc:
        raise ParaplagError(f"cannot read {path}: {exc}") from exc


def _effective_config(args) -> EngineConfig:
    config = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return config


def _load_pairs(args, config: EngineConfig) -> list[LabelledPair]:
    kind = args.corpus
    if kind == "crowd":
        pairs = load_crowd(args.corpus_path)
    elif kind == "cs":
        if args.truth is None:
            raise ConfigError("--corpus cs requires --truth TRUTH_FILE")
        pairs = load_clough_stevenson(args.corpus_path, args.truth)
    elif kind == "jsonl":
        pairs = load_pairs_jsonl(args.corpus_path)
    else:  # argparse choices make this unreachable
        raise ConfigError(f"unknown corpus kind {kind!r}")
    sample = getattr(args, "sample", None)
    if sample is not None:
        if sample < 1:
            raise ConfigError(f"--sample must be >= 1, got {sample}")
        if sample < len(pairs):
            rng = random.Random(config.seed)
            keep = sorted(rng.sample(range(len(pairs)), sample))
            pairs = [pairs[i] for i in keep]
    return pairs


def _ensure_out_dir(args) -> str:
    out = args.out
    os.makedirs(out, exist_ok=True)
    return out


def _write_report(out_dir: str, name: str, report: EvalReport) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
        fh.write("\n")
    return path


def _print_report(report: EvalReport, title: str) -> None:
    c = report.confusion
    print(title)
    print("                 predicted + | predicted -")
    print(f"  actual +  {c.tp:12d} | {c.fn:11d}")
    print(f"  actual -  {c.fp:12d} | {c.tn:11d}")
    print(
        f"  precision {report.precision:.4f}  recall {report.recall:.4f}  "
        f"f1 {report.f1:.4f}  auc {report.auc:.4f}  "
        f"misclassification {report.misclassification_rate:.4f}"
    )


def _write_traces(out_dir: str, pairs, config: EngineConfig) -> str:
    stores = build_stores(config)
    params = feature_params(config)
    prep = prep_config(config)
    path = os.path.join(out_dir, "traces.jsonl")
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            for record in pair_traces(pair, stores, params, prep):
                fh.write(json.dumps(record, sort_keys=True))
                fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# Commands

def cmd_score(args) -> int:
    config = _effective_config(args)
    stores = build_stores(config)
    params = feature_params(config)
    prep = prep_config(config)
    suspect = _read_text_file(args.suspect)
    source = _read_text_file(args.source)
    vec = passage_features(suspect, source, stores=stores, params=params, prep=prep)
    if args.model is not None:
        model = load_model(args.model)
        label, score = predict_classifier(model, vec)
        rule = type(model).__name__.replace("Model", "").lower()
    else:
        score = (vec.semantic + vec.syntactic + vec.insdel) / 3.0
        label = score >= config.fallback_threshold
        rule = "threshold"
    result = {
        "features": vec.to_dict(),
        "label": PARAPHRASED if label else NOT_PARAPHRASED,
        "score": score,
        "rule": rule,
    }
    if args.debug_traces:
        pair = LabelledPair(
            pair_id="score",
            suspect_text=suspect,
            source_text=source,
            label=NOT_PARAPHRASED,
            origin="cli",
            raw_category="",
        )
        result["traces"] = pair_traces(pair, stores, params, prep)
    print(json.dumps(result, sort_keys=True, indent=2))
    return 0


def cmd_evaluate(args) -> int:
    config = _effective_config(args)
    pairs = _load_pairs(args, config)
    out_dir = _ensure_out_dir(args)
    vectors = extract_features(pairs, config, jobs=args.jobs)
    dataset = labelled_dataset(pairs, vectors)
    report = cross_validate(
        dataset, classifier_spec(config), k=config.folds, seed=config.seed
    )
    _write_report(out_dir, "report.json", report)
    write_feature_csv(os.path.join(out_dir, "features.csv"), pairs, vectors)
    _print_report(report, f"{config.classifier} over {len(pairs)} pairs, {config.folds}-fold")
    if args.baseline:
        containments = baseline_containments(pairs, config, jobs=args.jobs)
        labels = [p.is_paraphrased for p in pairs]
        breport = threshold_report(containments, labels, config.gst_threshold)
        _write_report(out_dir, "baseline.json", breport)
        baseline_csv_rows(os.path.join(out_dir, "baseline.csv"), pairs, containments)
        _print_report(breport, f"tiling baseline at threshold {config.gst_threshold}")
    if args.debug_traces:
        _write_traces(out_dir, pairs, config)
    return 0


def cmd_baseline(args) -> int:
    config = _effective_config(args)
    pairs = _load_pairs(args, config)
    out_dir = _ensure_out_dir(args)
    containments = baseline_containments(pairs, config, jobs=args.jobs)
    labels = [p.is_paraphrased for p in pairs]
    report = threshold_report(containments, labels, config.gst_threshold)
    _write_report(out_dir, "baseline.json", report)
    baseline_csv_rows(os.path.join(out_dir, "baseline.csv"), pairs, containments)
    _print_report(report, f"tiling baseline at threshold {config.gst_threshold}")
    return 0


def cmd_fit(args) -> int:
    config = _effective_config(args)
    pairs = _load_pairs(args, config)
    out_dir = _ensure_out_dir(args)
    vectors = extract_features(pairs, config, jobs=args.jobs)
    dataset = labelled_dataset(pairs, vectors)
    model = fit_classifier(classifier_spec(config), dataset)
    model_path = os.path.join(out_dir, "model.json")
    save_model(model, model_path)
    write_feature_csv(os.path.join(out_dir, "features.csv"), pairs, vectors)
    print(f"fitted {config.classifier} on {len(pairs)} pairs -> {model_path}")
    return 0


def cmd_crossval(args) -> int:
    config = _effective_config(args)
    try:
        ids, dataset = read_feature_csv(args.features)
    except OSError as exc:
        raise ParaplagError(f"cannot read feature table {args.features}: {exc}") from exc
    out_dir = _ensure_out_dir(args)
    report = cross_validate(
        dataset, classifier_spec(config), k=config.folds, seed=config.seed
    )
    _write_report(out_dir, "report.json", report)
    _print_report(report, f"{config.classifier} over {len(ids)} rows, {config.folds}-fold")
    return 0


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paraplag",
        description="Paraphrase detection: sentence similarity features, "
        "classification, and a string-tiling baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="flat JSON config file")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")

    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument("corpus_path", help="corpus directory (crowd/cs) or JSONL file")
    corpus.add_argument("--corpus", required=True, choices=CORPUS_KINDS, help="corpus layout")
    corpus.add_argument("--truth", default=None, help="truth table file (cs corpora)")
    corpus.add_argument("--sample", type=int, default=None, help="evaluate a seeded random subset")
    corpus.add_argument("--jobs", type=int, default=1, help="worker processes for pair scoring")
    corpus.add_argument("--out", required=True, help="output directory for reports and tables")

    p_score = sub.add_parser("score", parents=[common], help="score one file pair")
    p_score.add_argument("suspect", help="suspect text file")
    p_score.add_argument("source", help="source text file")
    p_score.add_argument("--model", default=None, help="fitted model JSON (else threshold rule)")
    p_score.add_argument("--debug-traces", action="store_true", help="include word-match traces")
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser("evaluate", parents=[common, corpus], help="cross-validated evaluation")
    p_eval.add_argument("--baseline", action="store_true", help="also run the tiling baseline")
    p_eval.add_argument("--debug-traces", action="store_true", help="write traces.jsonl")
    p_eval.set_defaults(func=cmd_evaluate)

    p_base = sub.add_parser("baseline", parents=[common, corpus], help="tiling threshold baseline")
    p_base.set_defaults(func=cmd_baseline)

    p_fit = sub.add_parser("fit", parents=[common, corpus], help="train and save a classifier")
    p_fit.set_defaults(func=cmd_fit)

    p_cv = sub.add_parser("crossval", parents=[common], help="cross-validate a feature table")
    p_cv.add_argument("features", help="feature CSV written by evaluate/fit")
    p_cv.add_argument("--out", required=True, help="output directory for the report")
    p_cv.set_defaults(func=cmd_crossval)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except MissingResource as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParaplagError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
