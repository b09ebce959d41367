"""Pair-scoring pipeline behind the command-line entry points.

Turns labelled text pairs into similarity vectors (optionally across a
process pool), computes tiling-containment baseline scores, builds
evaluation reports, and round-trips per-pair feature tables as CSV.
Workers rebuild their knowledge stores from the config, so results never
depend on how work was scheduled: output order always follows input
order.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .classify import (
    Confusion,
    EvalReport,
    FeatureParams,
    LabelledVector,
    SimilarityVector,
    auc_roc,
    metrics,
    misclassification_rate,
    passage_features,
)
from .config import EngineConfig, build_stores, feature_params, gst_params, prep_config
from .corpus import LabelledPair
from .errors import ParaplagError
from .gst import GstParams, gst_containment
from .resources import KnowledgeStores
from .semsim import match_sentence, semantic_similarity, trace_matches
from .textprep import PrepConfig, preprocess_passage


def features_for_pair(
    pair: LabelledPair,
    stores: KnowledgeStores,
    params: FeatureParams,
    prep: Optional[PrepConfig] = None,
) -> SimilarityVector:
    return passage_features(
        pair.suspect_text, pair.source_text, stores=stores, params=params, prep=prep
    )


def pair_traces(
    pair: LabelledPair,
    stores: KnowledgeStores,
    params: FeatureParams,
    prep: Optional[PrepConfig] = None,
) -> list[dict]:
    """Word-match traces for the best-matching source sentence per suspect sentence."""
    sp_sentences = preprocess_passage(pair.suspect_text, prep)
    sr_sentences = preprocess_passage(pair.source_text, prep)
    out: list[dict] = []
    for sp in sp_sentences:
        if not sp.content_tokens or not sr_sentences:
            continue
        best = max(
            sr_sentences,
            key=lambda sr: semantic_similarity(sp, sr, stores, params.sem),
        )
        out.append(
            {
                "pair_id": pair.pair_id,
                "suspect_sentence": sp.sentence_id,
                "source_sentence": best.sentence_id,
                "matches": trace_matches(match_sentence(sp, best, stores, params.sem)),
            }
        )
    return out


# ---------------------------------------------------------------------------
# Parallel feature extraction

# Each worker process loads the stores once at startup; tasks then carry
# only the pair payload.  Module-level state is the standard pattern for
# ProcessPoolExecutor initializers.
_WORKER: dict = {}


def _init_feature_worker(config_payload: dict) -> None:
    config = EngineConfig.from_dict(config_payload)
    _WORKER["stores"] = build_stores(config)
    _WORKER["params"] = feature_params(config)
    _WORKER["prep"] = prep_config(config)


def _feature_task(pair_payload: dict) -> dict:
    pair = LabelledPair.from_dict(pair_payload)
    vec = features_for_pair(pair, _WORKER["stores"], _WORKER["params"], _WORKER["prep"])
    return vec.to_dict()


def _init_baseline_worker(config_payload: dict) -> None:
    config = EngineConfig.from_dict(config_payload)
    _WORKER["gst"] = gst_params(config)


def _baseline_task(pair_payload: dict) -> float:
    pair = LabelledPair.from_dict(pair_payload)
    return gst_containment(pair.suspect_text, pair.source_text, _WORKER["gst"])


def extract_features(
    pairs: Sequence[LabelledPair],
    config: EngineConfig,
    jobs: int = 1,
    stores: KnowledgeStores | None = None,
) -> list[SimilarityVector]:
    """Similarity vectors for each pair, in input order.

    jobs > 1 spreads pairs over a process pool; passing prebuilt stores
    only short-circuits the serial path.
    """
    if jobs <= 1:
        if stores is None:
            stores = build_stores(config)
        params = feature_params(config)
        prep = prep_config(config)
        return [features_for_pair(p, stores, params, prep) for p in pairs]
    payloads = [p.to_dict() for p in pairs]
    with ProcessPoolExecutor(
        max_workers=jobs,
        initializer=_init_feature_worker,
        initargs=(config.to_dict(),),
    ) as pool:
        rows = list(pool.map(_feature_task, payloads, chunksize=8))
    return [SimilarityVector.from_dict(row) for row in rows]


def baseline_containments(
    pairs: Sequence[LabelledPair],
    config: EngineConfig,
    jobs: int = 1,
) -> list[float]:
    """Tiling containment score for each pair, in input order."""
    if jobs <= 1:
        gp = gst_params(config)
        return [gst_containment(p.suspect_text, p.source_text, gp) for p in pairs]
    payloads = [p.to_dict() for p in pairs]
    with ProcessPoolExecutor(
        max_workers=jobs,
        initializer=_init_baseline_worker,
        initargs=(config.to_dict(),),
    ) as pool:
        return list(pool.map(_baseline_task, payloads, chunksize=8))


# ---------------------------------------------------------------------------
# Reports

def labelled_dataset(
    pairs: Sequence[LabelledPair], vectors: Sequence[SimilarityVector]
) -> list[LabelledVector]:
    if len(pairs) != len(vectors):
        raise ValueError("pairs and vectors must align one-to-one")
    return [(vec, pair.is_paraphrased) for pair, vec in zip(pairs, vectors)]


def threshold_report(scores: Sequence[float], labels: Sequence[bool], threshold: float) -> EvalReport:
    """Evaluate the rule `score >= threshold` as a classifier (no folds)."""
    if len(scores) != len(labels):
        raise ValueError("scores and labels must align one-to-one")
    if not scores:
        raise ParaplagError("cannot evaluate an empty pair list")
    tp = fp = fn = tn = 0
    for score, label in zip(scores, labels):
        predicted = score >= threshold
        if predicted and label:
            tp += 1
        elif predicted:
            fp += 1
        elif label:
            fn += 1
        else:
            tn += 1
    confusion = Confusion(tp=tp, fp=fp, fn=fn, tn=tn)
    precision, recall, f1 = metrics(confusion)
    return EvalReport(
        confusion=confusion,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=auc_roc(scores, labels),
        misclassification_rate=misclassification_rate(confusion),
        folds=(),
    )


# ---------------------------------------------------------------------------
# Feature tables on disk

FEATURE_FIELDS = ("pair_id", "label", "semantic", "syntactic", "insdel")


def write_feature_csv(
    path,
    pairs: Sequence[LabelledPair],
    vectors: Sequence[SimilarityVector],
) -> None:
    """One row per pair: id, gold label, and the three feature values."""
    if len(pairs) != len(vectors):
        raise ValueError("pairs and vectors must align one-to-one")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FEATURE_FIELDS)
        for pair, vec in zip(pairs, vectors):
            writer.writerow(
                [
                    pair.pair_id,
                    int(pair.is_paraphrased),
                    repr(vec.semantic),
                    repr(vec.syntactic),
                    repr(vec.insdel),
                ]
            )


def read_feature_csv(path) -> tuple[list[str], list[LabelledVector]]:
    """Inverse of write_feature_csv: ids plus (vector, label) rows."""
    ids: list[str] = []
    dataset: list[LabelledVector] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(FEATURE_FIELDS):
            raise ParaplagError(
                f"feature table {path} has header {header}, expected {list(FEATURE_FIELDS)}"
            )
        for row in reader:
            if not row:
                continue
            if len(row) != len(FEATURE_FIELDS):
                raise ParaplagError(f"feature table {path} has a malformed row: {row}")
            pair_id, label, semantic, syntactic, insdel = row
            ids.append(pair_id)
            dataset.append(
                (
                    SimilarityVector(
                        semantic=float(semantic),
                        syntactic=float(syntactic),
                        insdel=float(insdel),
                    ),
                    bool(int(label)),
                )
            )
    return ids, dataset


def baseline_csv_rows(
    path,
    pairs: Sequence[LabelledPair],
    containments: Sequence[float],
) -> None:
    """One row per pair: id, gold label, tiling containment."""
    if len(pairs) != len(containments):
        raise ValueError("pairs and containments must align one-to-one")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair_id", "label", "containment"])
        for pair, score in zip(pairs, containments):
            writer.writerow([pair.pair_id, int(pair.is_paraphrased), repr(score)])
