"""Text preprocessing: sentence splitting, tokenization, normalization.

Turns raw passage text into ProcessedSentence records that the similarity
engines consume.  The pipeline is deliberately rule-based and free of any
model dependency so that identical input text always yields identical
output, token for token.

Pipeline per passage:

    split_sentences -> tokenize -> normalize -> stopword filter -> stem

Every token keeps its position in the sentence (before stopword removal),
its original surface form, a normalized form (diacritics stripped,
lowercased) and a Porter stem.  Semantic lookups downstream use the
normalized form, because lexical-database headwords are lemmas rather than
stems; stems serve for equality matching.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from typing import Iterable

from .errors import ParaplagError
from ._porter import porter_stem

__all__ = [
    "Token",
    "ProcessedSentence",
    "PrepConfig",
    "load_stopwords",
    "split_sentences",
    "tokenize",
    "normalize",
    "preprocess_passage",
    "sentence_to_dict",
]

# Alphanumeric runs; underscore excluded from \w so it acts as a separator.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_SENTENCE_TERMINATORS = ".?!"

# Words after which a period does not end a sentence.  Single letters
# ("J. Smith", "e.g.") are handled separately by a length check.
_ABBREVIATIONS = frozenset(
    {
        "dr", "mr", "mrs", "ms", "prof", "rev", "hon", "st", "sr", "jr",
        "vs", "etc", "fig", "figs", "eg", "ie", "al", "inc", "ltd", "co",
        "corp", "dept", "est", "vol", "pp", "ed", "eds", "approx",
    }
)

_STOPWORD_RESOURCE = "stopwords_english.txt"


class UnknownStemmer(ParaplagError):
    """Raised when PrepConfig names a stemmer variant that does not exist."""


@dataclass(frozen=True)
class Token:
    """One token of a sentence.

    index is the position within the sentence before stopword removal, so
    content tokens keep their original offsets.
    """

    index: int
    surface: str
    normalized: str
    stem: str


@dataclass(frozen=True)
class ProcessedSentence:
    sentence_id: int
    text: str
    all_tokens: tuple[Token, ...]
    content_tokens: tuple[Token, ...]


@dataclass(frozen=True)
class PrepConfig:
    """Preprocessing knobs.

    stopwords is the active stopword set (already loaded); stemmer names the
    stemming variant.  Only the classic Porter stemmer is implemented, but
    the field keeps the choice explicit and validated.
    """

    stopwords: frozenset[str] = field(default_factory=frozenset)
    stemmer: str = "porter"

    def __post_init__(self) -> None:
        if self.stemmer != "porter":
            raise UnknownStemmer(f"unknown stemmer variant: {self.stemmer!r}")

    @classmethod
    def default(cls) -> "PrepConfig":
        return cls(stopwords=_default_stopwords())


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def _default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        ref = importlib_resources.files("paraplag") / "data" / _STOPWORD_RESOURCE
        _DEFAULT_STOPWORDS = _parse_stopwords(
            ref.read_text(encoding="utf-8").splitlines()
        )
    return _DEFAULT_STOPWORDS


def _parse_stopwords(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        word = line.split("#", 1)[0].strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


def load_stopwords(path) -> frozenset[str]:
    """Load a stopword list: one lowercase word per line, '#' comments."""
    with open(path, encoding="utf-8") as fh:
        return _parse_stopwords(fh)


def normalize(surface: str) -> str:
    """Strip diacritics (NFD decomposition) and lowercase."""
    decomposed = unicodedata.normalize("NFD", surface)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.lower()


def _word_before(text: str, pos: int) -> str:
    """Letters immediately preceding text[pos], for abbreviation checks."""
    start = pos
    while start > 0 and text[start - 1].isalpha():
        start -= 1
    return text[start:pos]


def split_sentences(text: str) -> list[str]:
    """Split passage text into sentences.

    A boundary is a run of [.?!] followed by whitespace and an uppercase
    letter, unless the word before the punctuation is a known abbreviation
    or a single letter (an initial).  Text without terminal punctuation is a
    single sentence.  The concatenation of the outputs preserves every
    non-whitespace character of the input.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _SENTENCE_TERMINATORS:
            run_end = i + 1
            while run_end < n and text[run_end] in _SENTENCE_TERMINATORS:
                run_end += 1
            j = run_end
            while j < n and text[j].isspace():
                j += 1
            boundary = j > run_end and j < n and text[j].isupper()
            if boundary and text[i] == ".":
                word = _word_before(text, i)
                if len(word) == 1 or word.lower() in _ABBREVIATIONS:
                    boundary = False
            if boundary:
                chunk = text[start:run_end].strip()
                if chunk:
                    sentences.append(chunk)
                start = j
                i = j
                continue
            i = run_end
            continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Split a sentence into surface tokens (alphanumeric runs)."""
    return _TOKEN_RE.findall(sentence)


def _make_tokens(sentence: str) -> tuple[Token, ...]:
    tokens = []
    for idx, surface in enumerate(tokenize(sentence)):
        norm = normalize(surface)
        stem = porter_stem(norm) if norm else ""
        # A non-empty normalized form must never stem to nothing.
        if norm and not stem:
            stem = norm
        tokens.append(Token(index=idx, surface=surface, normalized=norm, stem=stem))
    return tuple(tokens)


def preprocess_passage(text: str, config: PrepConfig | None = None) -> list[ProcessedSentence]:
    """Preprocess passage text into a list of ProcessedSentence.

    Sentences are numbered in order of appearance.  content_tokens holds
    the same Token objects as all_tokens minus stopwords, so indices stay
    comparable across the two views.
    """
    if config is None:
        config = PrepConfig.default()
    out = []
    for sid, sentence in enumerate(split_sentences(text)):
        all_tokens = _make_tokens(sentence)
        content = tuple(t for t in all_tokens if t.normalized not in config.stopwords)
        out.append(
            ProcessedSentence(
                sentence_id=sid,
                text=sentence,
                all_tokens=all_tokens,
                content_tokens=content,
            )
        )
    return out


def sentence_to_dict(sentence: ProcessedSentence) -> dict:
    """JSON-ready representation, used by debug traces and determinism checks."""
    return {
        "sentence_id": sentence.sentence_id,
        "text": sentence.text,
        "all_tokens": [
            {"index": t.index, "surface": t.surface, "normalized": t.normalized, "stem": t.stem}
            for t in sentence.all_tokens
        ],
        "content_indices": [t.index for t in sentence.content_tokens],
    }
