"""Semantic similarity: word-substitution detection between sentences.

Each content word of the suspect sentence is matched against the source
sentence's remaining content words through a cascade of channels, tried
in a fixed order:

  exact      stem or normalized-form equality
  synonym    source word appears in the query word's synonym set
  embedding  best cosine between the query's synonym vectors (or the
             query's own vector when it has no synonyms) and a source
             word vector, kept when it reaches ``embed_min``
  resnik     information content of the most specific shared ancestor,
             kept when it reaches ``resnik_min``

The first channel that fires wins and consumes the matched source word,
so one source word never accounts for two query words.  The sentence
score is the fraction of query words that found a match: containment in
the suspect direction, not a symmetric similarity.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from ._porter import porter_stem
from .errors import ParaplagError
from .resources import KnowledgeStores, LexicalStore, cosine, resnik, synonyms
from .textprep import ProcessedSentence, Token


class EmptySentence(ParaplagError):
    """Suspect sentence has no content words to score."""


@dataclass(frozen=True)
class SemThresholds:
    """Cut-offs for the two score-producing channels."""

    embed_min: float = 0.6
    resnik_min: float = 3.0

    def __post_init__(self):
        if not (math.isfinite(self.embed_min) and 0.0 <= self.embed_min <= 1.0):
            raise ValueError(f"embed_min must be in [0, 1], got {self.embed_min!r}")
        if not (math.isfinite(self.resnik_min) and self.resnik_min >= 0.0):
            raise ValueError(
                f"resnik_min must be finite and non-negative, got {self.resnik_min!r}"
            )


CHANNELS = ("exact", "synonym", "embedding", "resnik")


@dataclass(frozen=True)
class WordMatch:
    query_index: int
    source_index: int
    channel: str
    score: float

    def to_dict(self) -> dict:
        return {
            "query_index": self.query_index,
            "source_index": self.source_index,
            "channel": self.channel,
            "score": self.score,
        }


def _expand(lexdb: LexicalStore | None, token: Token) -> set[str]:
    """Synonyms of the query word; stem is the one fallback headword."""
    if lexdb is None:
        return set()
    if lexdb.synsets_of(token.normalized):
        return synonyms(lexdb, token.normalized)
    return synonyms(lexdb, token.stem)


def _db_form(lexdb: LexicalStore, token: Token) -> str:
    if lexdb.synsets_of(token.normalized):
        return token.normalized
    return token.stem


def match_word(
    query: Token,
    source_remaining: Sequence[Token],
    stores: KnowledgeStores | None = None,
    thresholds: SemThresholds | None = None,
) -> WordMatch | None:
    """First match for one query word, or None when no channel fires."""
    stores = stores if stores is not None else KnowledgeStores.empty()
    th = thresholds if thresholds is not None else SemThresholds()

    for tok in source_remaining:
        if tok.stem == query.stem or tok.normalized == query.normalized:
            return WordMatch(query.index, tok.index, "exact", 1.0)

    syns = _expand(stores.lexdb, query)
    if syns:
        stemmed = {porter_stem(s) for s in syns}
        for tok in source_remaining:
            if tok.normalized in syns or tok.stem in stemmed:
                return WordMatch(query.index, tok.index, "synonym", 1.0)

    emb = stores.embeddings
    if emb is not None:
        query_words = sorted(syns) if syns else [query.normalized]
        query_vecs = [
            vec for w in query_words if (vec := emb.lookup_folded(w)) is not None
        ]
        if query_vecs:
            best_tok: Token | None = None
            best_score = 0.0
            for tok in source_remaining:
                svec = emb.lookup_folded(tok.normalized)
                if svec is None:
                    continue
                score = max(cosine(qvec, svec) for qvec in query_vecs)
                if score >= th.embed_min and (best_tok is None or score > best_score):
                    best_tok, best_score = tok, score
            if best_tok is not None:
                return WordMatch(query.index, best_tok.index, "embedding", best_score)

    if stores.lexdb is not None and stores.ic is not None:
        qform = _db_form(stores.lexdb, query)
        best_tok = None
        best_ic = 0.0
        for tok in source_remaining:
            value = resnik(stores.lexdb, stores.ic, qform, _db_form(stores.lexdb, tok))
            if value is None or value < th.resnik_min:
                continue
            if best_tok is None or value > best_ic:
                best_tok, best_ic = tok, value
        if best_tok is not None:
            return WordMatch(query.index, best_tok.index, "resnik", best_ic)

    return None


def match_sentence(
    sp: ProcessedSentence,
    sr: ProcessedSentence,
    stores: KnowledgeStores | None = None,
    thresholds: SemThresholds | None = None,
) -> list[WordMatch]:
    """Matches for every suspect content word, consuming source words."""
    remaining = list(sr.content_tokens)
    matches: list[WordMatch] = []
    for query in sp.content_tokens:
        found = match_word(query, remaining, stores, thresholds)
        if found is not None:
            matches.append(found)
            remaining = [t for t in remaining if t.index != found.source_index]
    return matches


def semantic_similarity(
    sp: ProcessedSentence,
    sr: ProcessedSentence,
    stores: KnowledgeStores | None = None,
    thresholds: SemThresholds | None = None,
) -> float:
    """Fraction of suspect content words matched somewhere in the source."""
    if not sp.content_tokens:
        raise EmptySentence(f"no content words in sentence: {sp.text!r}")
    matches = match_sentence(sp, sr, stores, thresholds)
    return len(matches) / len(sp.content_tokens)


def trace_matches(matches: Iterable[WordMatch]) -> list[dict]:
    """JSON-ready view of a match list, in match order."""
    return [m.to_dict() for m in matches]
