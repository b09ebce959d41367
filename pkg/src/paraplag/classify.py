"""Feature fusion and evaluation: from passage scores to labelled decisions.

A suspect/source passage pair becomes one three-component vector (the
semantic, word-order, and insert/delete dimensions).  Two small
classifiers consume those vectors, k-nearest-neighbours and Gaussian
Naive Bayes, and a stratified cross-validation driver produces the
confusion matrix, precision/recall/F1, pooled AUC, and per-fold metrics
as one JSON-ready report.
"""

from __future__ import annotations

import json
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .editsim import insdel_similarity
from .errors import ParaplagError
from .resources import KnowledgeStores
from .semsim import SemThresholds, semantic_similarity
from .synsim import syntactic_similarity
from .textprep import PrepConfig, preprocess_passage

LabelledVector = tuple["SimilarityVector", bool]


class EmptyPassage(ParaplagError):
    """Passage produced no sentences at all."""


class EmptyTrainingSet(ParaplagError):
    """Classifier fitted with no training examples."""


class DegenerateClass(ParaplagError):
    """A class label has no training examples."""


class InsufficientData(ParaplagError):
    """Too few examples of a class to fill every fold."""


class SingleClassInput(ParaplagError):
    """Ranking metric needs both classes present."""


@dataclass(frozen=True)
class SimilarityVector:
    semantic: float
    syntactic: float
    insdel: float

    def __post_init__(self):
        for name, value in self.to_dict().items():
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {value!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.semantic, self.syntactic, self.insdel], dtype=np.float64)

    def to_dict(self) -> dict:
        return {
            "semantic": self.semantic,
            "syntactic": self.syntactic,
            "insdel": self.insdel,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SimilarityVector":
        return cls(payload["semantic"], payload["syntactic"], payload["insdel"])


# ---------------------------------------------------------------------------
# Passage-level feature extraction


@dataclass(frozen=True)
class FeatureParams:
    """Sentence-matching thresholds for passage-level aggregation."""

    sem: SemThresholds = field(default_factory=SemThresholds)
    discard_semantic: float = 0.3
    discard_syntactic: float = 0.3
    discard_insdel: float = 0.3

    def __post_init__(self):
        for name in ("discard_semantic", "discard_syntactic", "discard_insdel"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {value!r}")


def _aggregate(per_sentence_maxima: list[float], discard: float) -> float:
    kept = [s for s in per_sentence_maxima if s >= discard]
    if not kept:
        return 0.0
    return sum(kept) / len(kept)


def passage_features(
    suspect: str,
    source: str,
    stores: KnowledgeStores | None = None,
    params: FeatureParams | None = None,
    prep: PrepConfig | None = None,
) -> SimilarityVector:
    """Best-match sentence scores per dimension, filtered and averaged.

    Every suspect sentence keeps only its best score against the source
    passage; scores under the dimension's discard threshold drop out, and
    the survivors' mean is the passage score (0.0 when nothing survives).
    """
    p = params if params is not None else FeatureParams()
    sp_sentences = preprocess_passage(suspect, prep)
    sr_sentences = preprocess_passage(source, prep)
    if not sp_sentences or not sr_sentences:
        raise EmptyPassage("both passages need at least one sentence")

    semantic_maxima = []
    insdel_maxima = []
    for sp in sp_sentences:
        if not sp.content_tokens:
            continue
        semantic_maxima.append(
            max(semantic_similarity(sp, sr, stores, p.sem) for sr in sr_sentences)
        )
        sp_stems = [t.stem for t in sp.content_tokens]
        insdel_maxima.append(
            max(
                insdel_similarity(sp_stems, [t.stem for t in sr.content_tokens])
                for sr in sr_sentences
            )
        )

    syntactic_maxima = []
    for sp in sp_sentences:
        if not sp.all_tokens:
            continue
        syntactic_maxima.append(
            max(
                syntactic_similarity(sp.all_tokens, sr.all_tokens)
                for sr in sr_sentences
            )
        )

    return SimilarityVector(
        semantic=_aggregate(semantic_maxima, p.discard_semantic),
        syntactic=_aggregate(syntactic_maxima, p.discard_syntactic),
        insdel=_aggregate(insdel_maxima, p.discard_insdel),
    )


# ---------------------------------------------------------------------------
# Confusion arithmetic


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name, value in self.to_dict().items():
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative int, got {value!r}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(
            self.tp + other.tp,
            self.fp + other.fp,
            self.fn + other.fn,
            self.tn + other.tn,
        )

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}

    @classmethod
    def from_dict(cls, payload: dict) -> "Confusion":
        return cls(payload["tp"], payload["fp"], payload["fn"], payload["tn"])


def metrics(c: Confusion) -> tuple[float, float, float]:
    """(precision, recall, f1), each 0.0 when its denominator vanishes."""
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    )
    return precision, recall, f1


def misclassification_rate(c: Confusion) -> float:
    return (c.fp + c.fn) / c.total if c.total else 0.0


def auc_roc(scores: Sequence[float], labels: Sequence[bool]) -> float:
    """Chance a random positive outscores a random negative; ties count half."""
    if len(scores) != len(labels):
        raise ValueError("scores and labels must align")
    flags = [bool(l) for l in labels]
    n_pos = sum(flags)
    n_neg = len(flags) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassInput("need at least one positive and one negative")
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for pos in range(i, j + 1):
            ranks[order[pos]] = mean_rank
        i = j + 1
    rank_sum = sum(r for r, flag in zip(ranks, flags) if flag)
    u_statistic = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u_statistic / (n_pos * n_neg)


# ---------------------------------------------------------------------------
# Classifiers


@dataclass
class KnnModel:
    points: np.ndarray  # (n, 3) float64
    labels: np.ndarray  # (n,) bool
    k: int

    def to_dict(self) -> dict:
        return {
            "kind": "knn",
            "k": self.k,
            "points": [[float(v) for v in row] for row in self.points],
            "labels": [bool(l) for l in self.labels],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "KnnModel":
        return cls(
            points=np.asarray(payload["points"], dtype=np.float64),
            labels=np.asarray(payload["labels"], dtype=bool),
            k=int(payload["k"]),
        )


def knn_fit(train: Sequence[LabelledVector], k: int = 5) -> KnnModel:
    if not train:
        raise EmptyTrainingSet("no training vectors")
    if not 1 <= k <= len(train):
        raise ValueError(f"k must be in [1, {len(train)}], got {k}")
    points = np.stack([x.as_array() for x, _ in train])
    labels = np.array([bool(lab) for _, lab in train], dtype=bool)
    return KnnModel(points=points, labels=labels, k=k)


def knn_predict(model: KnnModel, x: SimilarityVector) -> tuple[bool, float]:
    """Majority vote of the k nearest; ties in distance break on insert order."""
    deltas = model.points - x.as_array()
    squared = np.einsum("ij,ij->i", deltas, deltas)
    nearest = np.argsort(squared, kind="stable")[: model.k]
    score = float(np.count_nonzero(model.labels[nearest])) / model.k
    return score > 0.5, score


@dataclass
class NbModel:
    means: np.ndarray  # (2, 3): row 0 negative, row 1 positive
    variances: np.ndarray  # (2, 3), floored
    priors: np.ndarray  # (2,)

    VAR_FLOOR = 1e-9

    def to_dict(self) -> dict:
        return {
            "kind": "nb",
            "means": [[float(v) for v in row] for row in self.means],
            "variances": [[float(v) for v in row] for row in self.variances],
            "priors": [float(p) for p in self.priors],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NbModel":
        return cls(
            means=np.asarray(payload["means"], dtype=np.float64),
            variances=np.asarray(payload["variances"], dtype=np.float64),
            priors=np.asarray(payload["priors"], dtype=np.float64),
        )


def nb_fit(train: Sequence[LabelledVector]) -> NbModel:
    if not train:
        raise EmptyTrainingSet("no training vectors")
    points = np.stack([x.as_array() for x, _ in train])
    labels = np.array([bool(lab) for _, lab in train], dtype=bool)
    means = np.zeros((2, 3))
    variances = np.zeros((2, 3))
    priors = np.zeros(2)
    for row, flag in enumerate((False, True)):
        cluster = points[labels == flag]
        if cluster.shape[0] == 0:
            raise DegenerateClass(f"no training examples labelled {flag}")
        means[row] = cluster.mean(axis=0)
        variances[row] = np.maximum(cluster.var(axis=0), NbModel.VAR_FLOOR)
        priors[row] = cluster.shape[0] / points.shape[0]
    return NbModel(means=means, variances=variances, priors=priors)


def nb_predict(model: NbModel, x: SimilarityVector) -> tuple[bool, float]:
    """Posterior of the positive class from per-feature Gaussian likelihoods."""
    vec = x.as_array()
    log_joint = np.log(model.priors) + np.sum(
        -0.5 * np.log(2.0 * np.pi * model.variances)
        - (vec - model.means) ** 2 / (2.0 * model.variances),
        axis=1,
    )
    shifted = log_joint - log_joint.max()
    posterior = float(np.exp(shifted[1]) / np.exp(shifted).sum())
    return posterior >= 0.5, posterior


Model = KnnModel | NbModel


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    knn_k: int = 5

    def __post_init__(self):
        if self.kind not in ("knn", "nb"):
            raise ValueError(f"kind must be 'knn' or 'nb', got {self.kind!r}")
        if self.knn_k < 1:
            raise ValueError(f"knn_k must be >= 1, got {self.knn_k}")


def fit_classifier(spec: ClassifierSpec, train: Sequence[LabelledVector]) -> Model:
    if spec.kind == "knn":
        return knn_fit(train, spec.knn_k)
    return nb_fit(train)


def predict_classifier(model: Model, x: SimilarityVector) -> tuple[bool, float]:
    if isinstance(model, KnnModel):
        return knn_predict(model, x)
    return nb_predict(model, x)


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("kind") == "knn":
        return KnnModel.from_dict(payload)
    if payload.get("kind") == "nb":
        return NbModel.from_dict(payload)
    raise ValueError(f"unknown model kind {payload.get('kind')!r}")


# ---------------------------------------------------------------------------
# Cross-validation


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    confusion: Confusion
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {
            "fold": self.fold,
            "confusion": self.confusion.to_dict(),
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


@dataclass(frozen=True)
class EvalReport:
    confusion: Confusion
    precision: float
    recall: float
    f1: float
    auc: float
    misclassification_rate: float
    folds: tuple[FoldMetrics, ...]

    def to_dict(self) -> dict:
        return {
            "confusion": self.confusion.to_dict(),
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
            "misclassification_rate": self.misclassification_rate,
            "folds": [fm.to_dict() for fm in self.folds],
        }


def report_to_json(report: EvalReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2)


def stratified_folds(labels: Sequence[bool], k: int, seed: int) -> list[list[int]]:
    """Disjoint index folds; per-class sizes differ by at most one item."""
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (False, True):
        indices = [i for i, lab in enumerate(labels) if bool(lab) == cls]
        rng.shuffle(indices)
        for j, idx in enumerate(indices):
            folds[j % k].append(idx)
    return [sorted(fold) for fold in folds]


def cross_validate(
    dataset: Sequence[LabelledVector],
    spec: ClassifierSpec,
    k: int = 10,
    seed: int = 0,
) -> EvalReport:
    """Stratified k-fold evaluation with pooled scores for AUC."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    labels = [bool(lab) for _, lab in dataset]
    for cls in (False, True):
        if sum(1 for lab in labels if lab == cls) < k:
            raise InsufficientData(
                f"class {cls} has fewer than {k} examples; cannot stratify"
            )
    folds = stratified_folds(labels, k, seed)
    pooled_scores: list[float] = []
    pooled_labels: list[bool] = []
    fold_metrics: list[FoldMetrics] = []
    aggregate = Confusion(0, 0, 0, 0)
    for fold_index, test_indices in enumerate(folds):
        held_out = set(test_indices)
        train = [dataset[i] for i in range(len(dataset)) if i not in held_out]
        model = fit_classifier(spec, train)
        tp = fp = fn = tn = 0
        for i in test_indices:
            x, raw_label = dataset[i]
            truth = bool(raw_label)
            predicted, score = predict_classifier(model, x)
            pooled_scores.append(score)
            pooled_labels.append(truth)
            if predicted and truth:
                tp += 1
            elif predicted and not truth:
                fp += 1
            elif not predicted and truth:
                fn += 1
            else:
                tn += 1
        confusion = Confusion(tp, fp, fn, tn)
        precision, recall, f1 = metrics(confusion)
        fold_metrics.append(
            FoldMetrics(fold_index, confusion, precision, recall, f1)
        )
        aggregate = aggregate + confusion
    precision, recall, f1 = metrics(aggregate)
    return EvalReport(
        confusion=aggregate,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=auc_roc(pooled_scores, pooled_labels),
        misclassification_rate=misclassification_rate(aggregate),
        folds=tuple(fold_metrics),
    )
