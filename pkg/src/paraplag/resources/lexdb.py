"""Lexical database backed by WordNet 3.0 plain-text files.

Parses the standard ``index.<pos>`` / ``data.<pos>`` layout into an
immutable in-memory store.  Only the pieces the engine needs are kept:
synset lemma sets, sense ordering per lemma, and hypernym ('@') pointers.
All other pointer types are discarded at parse time.

A synset is identified by ``(byte_offset, pos_char)`` exactly as in the
source files, so identifiers line up with external information-content
tables keyed the same way.

The store is immutable after load and safe to share across threads; the
internal ancestor/depth memos are only ever extended with values that any
racing computation would reproduce identically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from ..errors import MissingFile, ParaplagError

__all__ = [
    "SynsetId",
    "Synset",
    "LexicalStore",
    "MissingFile",
    "MalformedLine",
    "UnknownSynset",
    "load_lexdb",
    "synonyms",
    "lcs",
    "resnik",
]

SynsetId = tuple[int, str]

_POS_FILES = (("noun", "n"), ("verb", "v"), ("adj", "a"), ("adv", "r"))

# ss_type 's' (satellite adjective) lives in the adj data file; collapse it
# so identifiers match index references and IC table keys.
_SS_TYPE_MAP = {"n": "n", "v": "v", "a": "a", "s": "a", "r": "r"}


class MalformedLine(ParaplagError):
    """A data/index line does not parse under the expected layout."""

    def __init__(self, file: str, line_no: int, message: str = ""):
        self.file = file
        self.line_no = line_no
        detail = f"{file}:{line_no}"
        if message:
            detail += f": {message}"
        super().__init__(detail)


class UnknownSynset(ParaplagError):
    """A synset identifier is not present in the store."""


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lemmas: frozenset[str]
    hypernyms: tuple[SynsetId, ...]


def _strip_marker(word: str) -> str:
    # adjective syntactic markers: word(a), word(p), word(ip)
    if word.endswith(")") and "(" in word:
        word = word[: word.index("(")]
    return word


class LexicalStore:
    """Immutable lemma/synset store with hypernym navigation."""

    def __init__(
        self,
        synsets: dict[SynsetId, Synset],
        senses: dict[tuple[str, str], tuple[SynsetId, ...]],
    ):
        self._synsets = synsets
        self._senses = senses
        self._lemma_pos: dict[str, tuple[str, ...]] = {}
        for lemma, pos in senses:
            existing = self._lemma_pos.get(lemma, ())
            if pos not in existing:
                self._lemma_pos[lemma] = existing + (pos,)
        self._ancestor_memo: dict[SynsetId, frozenset[SynsetId]] = {}
        self._depth_memo: dict[SynsetId, int] = {}

    def synset(self, sid: SynsetId) -> Synset:
        try:
            return self._synsets[sid]
        except KeyError:
            raise UnknownSynset(f"no synset {sid!r}") from None

    def __contains__(self, sid: SynsetId) -> bool:
        return sid in self._synsets

    def synset_count(self, pos: str) -> int:
        return sum(1 for (_, p) in self._synsets if p == pos)

    def senses(self, word: str, pos: str) -> tuple[SynsetId, ...]:
        """Synset ids for a lemma in one part of speech, in sense order."""
        return self._senses.get((word, pos), ())

    def synsets_of(self, word: str) -> list[SynsetId]:
        """All synset ids containing the lemma, nouns first."""
        out: list[SynsetId] = []
        for _, pos in _POS_FILES:
            out.extend(self._senses.get((word, pos), ()))
        return out

    def hypernyms(self, sid: SynsetId) -> tuple[SynsetId, ...]:
        return self.synset(sid).hypernyms

    def ancestors(self, sid: SynsetId) -> frozenset[SynsetId]:
        """The synset itself plus every transitive hypernym."""
        memo = self._ancestor_memo
        cached = memo.get(sid)
        if cached is not None:
            return cached
        node = self.synset(sid)
        acc = {sid}
        for h in node.hypernyms:
            acc.update(self.ancestors(h))
        result = frozenset(acc)
        memo[sid] = result
        return result

    def depth(self, sid: SynsetId) -> int:
        """Longest hypernym path length from the synset to a root."""
        memo = self._depth_memo
        cached = memo.get(sid)
        if cached is not None:
            return cached
        node = self.synset(sid)
        value = 0
        if node.hypernyms:
            value = 1 + max(self.depth(h) for h in node.hypernyms)
        memo[sid] = value
        return value


def _parse_data_line(line: str, pos: str, file: str, line_no: int) -> Synset:
    fields = line.split()
    if len(fields) < 4:
        raise MalformedLine(file, line_no, "too few fields")
    try:
        offset = int(fields[0])
        ss_type = _SS_TYPE_MAP[fields[2]]
        w_cnt = int(fields[3], 16)
    except (ValueError, KeyError) as exc:
        raise MalformedLine(file, line_no, str(exc)) from None
    cursor = 4
    lemmas = set()
    for _ in range(w_cnt):
        try:
            word = fields[cursor]
            int(fields[cursor + 1], 16)  # lex_id sanity check
        except (IndexError, ValueError) as exc:
            raise MalformedLine(file, line_no, str(exc)) from None
        lemmas.add(_strip_marker(word).lower())
        cursor += 2
    try:
        p_cnt = int(fields[cursor])
    except (IndexError, ValueError) as exc:
        raise MalformedLine(file, line_no, str(exc)) from None
    cursor += 1
    hypernyms = []
    for _ in range(p_cnt):
        try:
            symbol = fields[cursor]
            target_offset = int(fields[cursor + 1])
            target_pos = fields[cursor + 2]
            fields[cursor + 3]  # source/target word index; presence check only
        except (IndexError, ValueError) as exc:
            raise MalformedLine(file, line_no, str(exc)) from None
        if symbol in ("@", "@i"):
            hypernyms.append((target_offset, _SS_TYPE_MAP.get(target_pos, target_pos)))
        cursor += 4
    # anything after the pointers (verb frames) up to '|' is ignored
    return Synset(
        id=(offset, ss_type),
        lemmas=frozenset(lemmas),
        hypernyms=tuple(hypernyms),
    )


def _parse_index_line(
    line: str, pos: str, file: str, line_no: int
) -> tuple[str, tuple[SynsetId, ...]]:
    fields = line.split()
    if len(fields) < 5:
        raise MalformedLine(file, line_no, "too few fields")
    lemma = fields[0].lower()
    try:
        synset_cnt = int(fields[2])
        offsets = [int(x) for x in fields[-synset_cnt:]]
    except (ValueError, IndexError) as exc:
        raise MalformedLine(file, line_no, str(exc)) from None
    if synset_cnt <= 0 or len(offsets) != synset_cnt:
        raise MalformedLine(file, line_no, "bad synset count")
    return lemma, tuple((o, pos) for o in offsets)


def _iter_content_lines(path: str) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line_no, raw in enumerate(fh, start=1):
            # license header lines start with whitespace
            if not raw.strip() or raw.startswith(" "):
                continue
            yield line_no, raw.rstrip("\n")


def load_lexdb(path) -> LexicalStore:
    """Load a WordNet 3.0 format directory into a LexicalStore.

    At minimum ``index.noun`` and ``data.noun`` must be present; the verb,
    adjective and adverb files are loaded when they exist.  Every hypernym
    pointer and index sense reference must resolve to a parsed synset.
    """
    path = os.fspath(path)
    if not os.path.isdir(path):
        raise MissingFile(f"lexical database directory not found: {path}")
    noun_index = os.path.join(path, "index.noun")
    noun_data = os.path.join(path, "data.noun")
    if not (os.path.isfile(noun_index) and os.path.isfile(noun_data)):
        raise MissingFile(f"no index.noun/data.noun pair in {path}")

    synsets: dict[SynsetId, Synset] = {}
    origin: dict[SynsetId, tuple[str, int]] = {}
    senses: dict[tuple[str, str], tuple[SynsetId, ...]] = {}
    index_origin: list[tuple[str, int, str, tuple[SynsetId, ...]]] = []

    for pos_name, pos in _POS_FILES:
        data_file = os.path.join(path, f"data.{pos_name}")
        index_file = os.path.join(path, f"index.{pos_name}")
        if not (os.path.isfile(data_file) and os.path.isfile(index_file)):
            continue
        for line_no, line in _iter_content_lines(data_file):
            synset = _parse_data_line(line, pos, data_file, line_no)
            if synset is not None:
                synsets[synset.id] = synset
                origin[synset.id] = (data_file, line_no)
        for line_no, line in _iter_content_lines(index_file):
            lemma, ids = _parse_index_line(line, pos, index_file, line_no)
            senses[(lemma, pos)] = ids
            index_origin.append((index_file, line_no, lemma, ids))

    for sid, synset in synsets.items():
        for hyp in synset.hypernyms:
            if hyp not in synsets:
                file, line_no = origin[sid]
                raise MalformedLine(
                    file, line_no, f"unresolved hypernym target {hyp!r}"
                )
    for file, line_no, lemma, ids in index_origin:
        for sid in ids:
            if sid not in synsets:
                raise MalformedLine(
                    file, line_no, f"index entry {lemma!r} references missing synset {sid!r}"
                )

    return LexicalStore(synsets, senses)


def synonyms(store: LexicalStore, word: str) -> set[str]:
    """Union of lemmas sharing a synset with the word, minus the word itself.

    Unknown words and words whose synsets hold no other lemma yield an
    empty set.  Multi-word lemmas keep their underscore form.
    """
    out: set[str] = set()
    for sid in store.synsets_of(word):
        out.update(store.synset(sid).lemmas)
    out.discard(word)
    return out


def lcs(
    store: LexicalStore,
    c1: SynsetId,
    c2: SynsetId,
    ic=None,
) -> Optional[SynsetId]:
    """Lowest common subsumer of two synsets.

    With an information-content table the candidate with maximal IC wins;
    without one (or when no common ancestor carries an IC value) the
    deepest common ancestor wins.  Returns None when the taxonomies are
    disjoint.  Ties resolve to the deepest candidate, then the smallest
    identifier, so the choice is deterministic.
    """
    common = store.ancestors(c1) & store.ancestors(c2)
    if not common:
        return None
    if ic is not None:
        with_ic = [(cid, ic.get(cid)) for cid in common]
        scored = [(v, cid) for cid, v in with_ic if v is not None]
        if scored:
            return max(
                scored,
                key=lambda t: (t[0], store.depth(t[1]), (-t[1][0], t[1][1])),
            )[1]
    return max(common, key=lambda cid: (store.depth(cid), (-cid[0], cid[1])))


# Word-pair specificity scores repeat heavily across sentence pairs; the
# stores are immutable, so caching on their identities is safe.
@lru_cache(maxsize=262144)
def _resnik_cached(store: LexicalStore, ic, w1: str, w2: str) -> Optional[float]:
    best: Optional[float] = None
    for pos in ("n", "v"):
        for s1 in store.senses(w1, pos):
            for s2 in store.senses(w2, pos):
                subsumer = lcs(store, s1, s2, ic)
                if subsumer is None:
                    continue
                value = ic.get(subsumer)
                if value is None:
                    continue
                if best is None or value > best:
                    best = value
    return best


def resnik(store: LexicalStore, ic, w1: str, w2: str) -> Optional[float]:
    """Maximum subsumer information content over noun and verb sense pairs.

    Only parts of speech with a hypernym hierarchy take part.  Returns
    None when either word is unknown in those parts of speech or no sense
    pair shares a subsumer carrying an IC value.
    """
    return _resnik_cached(store, ic, w1, w2)
