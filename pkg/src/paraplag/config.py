"""Engine configuration: one flat JSON file drives every run.

The config names the knowledge resources on disk (lexical database
directory, information-content file, embedding file, optional stopword
list), the scoring thresholds, the tiling parameters, and the classifier
choice.  `load_config` parses and validates; `build_stores` turns the
resource paths into loaded stores, failing with `MissingResource` when a
referenced path does not exist.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Any

from .classify import ClassifierSpec, FeatureParams
from .errors import ParaplagError
from .gst import GstParams
from .resources import KnowledgeStores, load_embeddings, load_ic, load_lexdb
from .semsim import SemThresholds
from .textprep import PrepConfig, load_stopwords


class ConfigError(ParaplagError):
    """The configuration file is unreadable, malformed, or out of range."""


class MissingResource(ParaplagError):
    """A resource path named by the configuration does not exist."""


EMBEDDING_FORMATS = ("text", "binary")
CLASSIFIER_KINDS = ("knn", "nb")


@dataclass(frozen=True)
class EngineConfig:
    """Validated settings for a scoring or evaluation run.

    Resource paths default to None, meaning the corresponding store is
    absent and the channels that need it simply never match.  All other
    fields carry working defaults, so `{}` is a valid config.
    """

    lexdb_dir: str | None = None
    ic_file: str | None = None
    embedding_file: str | None = None
    embedding_format: str = "text"
    stopword_file: str | None = None

    embed_min: float = 0.6
    resnik_min: float = 3.0
    discard_semantic: float = 0.3
    discard_syntactic: float = 0.3
    discard_insdel: float = 0.3

    gst_min_match: int = 5
    gst_min_tile: int = 10
    gst_threshold: float = 0.15
    gst_max_chars: int = 50_000

    classifier: str = "knn"
    knn_k: int = 5
    folds: int = 10
    seed: int = 0
    # score rule used when no fitted model is given: mean feature >= this
    fallback_threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.embedding_format not in EMBEDDING_FORMATS:
            raise ConfigError(
                f"embedding_format must be one of {EMBEDDING_FORMATS}, "
                f"got {self.embedding_format!r}"
            )
        if self.classifier not in CLASSIFIER_KINDS:
            raise ConfigError(
                f"classifier must be one of {CLASSIFIER_KINDS}, got {self.classifier!r}"
            )
        if not isinstance(self.folds, int) or self.folds < 2:
            raise ConfigError(f"folds must be an integer >= 2, got {self.folds!r}")
        if not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if not 0.0 <= self.fallback_threshold <= 1.0:
            raise ConfigError(
                f"fallback_threshold must be within [0, 1], got {self.fallback_threshold}"
            )
        # Delegate range checks to the parameter types themselves so the
        # config cannot drift from what the scoring code accepts.
        try:
            feature_params(self)
            gst_params(self)
            classifier_spec(self)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "EngineConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def load_config(path) -> EngineConfig:
    """Read and validate a flat JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return EngineConfig.from_dict(raw)


def feature_params(config: EngineConfig) -> FeatureParams:
    return FeatureParams(
        sem=SemThresholds(embed_min=config.embed_min, resnik_min=config.resnik_min),
        discard_semantic=config.discard_semantic,
        discard_syntactic=config.discard_syntactic,
        discard_insdel=config.discard_insdel,
    )


def gst_params(config: EngineConfig) -> GstParams:
    return GstParams(
        min_match=config.gst_min_match,
        min_tile=config.gst_min_tile,
        threshold=config.gst_threshold,
        max_chars=config.gst_max_chars,
    )


def classifier_spec(config: EngineConfig) -> ClassifierSpec:
    return ClassifierSpec(kind=config.classifier, knn_k=config.knn_k)


def validate_resources(config: EngineConfig) -> None:
    """Check every referenced resource path exists; MissingResource if not."""
    missing = []
    if config.lexdb_dir is not None and not os.path.isdir(config.lexdb_dir):
        missing.append(f"lexdb_dir: {config.lexdb_dir}")
    for label, path in (
        ("ic_file", config.ic_file),
        ("embedding_file", config.embedding_file),
        ("stopword_file", config.stopword_file),
    ):
        if path is not None and not os.path.isfile(path):
            missing.append(f"{label}: {path}")
    if missing:
        raise MissingResource("resource paths do not exist: " + "; ".join(missing))


def build_stores(config: EngineConfig) -> KnowledgeStores:
    """Load every configured resource into memory."""
    validate_resources(config)
    lexdb = load_lexdb(config.lexdb_dir) if config.lexdb_dir is not None else None
    ic = load_ic(config.ic_file) if config.ic_file is not None else None
    emb = (
        load_embeddings(config.embedding_file, format=config.embedding_format)
        if config.embedding_file is not None
        else None
    )
    return KnowledgeStores(lexdb=lexdb, ic=ic, embeddings=emb)


def prep_config(config: EngineConfig) -> PrepConfig:
    """Preprocessing settings; a custom stopword list replaces the default."""
    if config.stopword_file is None:
        return PrepConfig.default()
    return PrepConfig(stopwords=load_stopwords(config.stopword_file))
