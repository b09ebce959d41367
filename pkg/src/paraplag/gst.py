"""Greedy string tiling over characters: the verbatim-copy baseline.

Rounds of matching each mark the longest common substring whose
characters are still unmarked on both sides (ties: smallest suspect
offset, then smallest source offset), stopping below ``min_match``.
Adjacent tiles are merged, short tiles dropped, and the surviving
coverage of the suspect text becomes the containment score.

Matching walks equality runs per alignment diagonal, kept in a max-heap
and re-checked lazily: a popped run that lost characters to newer marks
is split into its surviving pieces and pushed back.  Marks only ever
shrink runs, so the first fully-intact pop is the true round winner.
Worst case stays quadratic in text length, hence the ``max_chars`` cap.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParaplagError


class EmptySuspect(ParaplagError):
    """Suspect text has no characters left after canonicalization."""


class InputTooLarge(ParaplagError):
    """Text length exceeds the configured matching cap."""


@dataclass(frozen=True)
class GstParams:
    min_match: int = 5
    min_tile: int = 10
    threshold: float = 0.15
    max_chars: int = 50_000

    def __post_init__(self):
        if self.min_match < 1:
            raise ValueError(f"min_match must be >= 1, got {self.min_match}")
        if self.min_tile < self.min_match:
            raise ValueError(
                f"min_tile ({self.min_tile}) must be >= min_match ({self.min_match})"
            )
        if not (math.isfinite(self.threshold) and 0.0 <= self.threshold <= 1.0):
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold!r}")
        if self.max_chars < 1:
            raise ValueError(f"max_chars must be >= 1, got {self.max_chars}")


@dataclass(frozen=True)
class Tile:
    suspect_offset: int
    source_offset: int
    length: int

    def to_dict(self) -> dict:
        return {
            "suspect_offset": self.suspect_offset,
            "source_offset": self.source_offset,
            "length": self.length,
        }


def canonicalize(text: str) -> str:
    """Lowercase with whitespace runs collapsed to single spaces."""
    return " ".join(text.lower().split())


def _codepoints(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("utf-32-le"), dtype="<u4")


def _true_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """(start, length) of each maximal True stretch."""
    edges = np.flatnonzero(
        np.diff(np.concatenate(([False], mask, [False])).astype(np.int8))
    )
    return [(int(s), int(e - s)) for s, e in zip(edges[::2], edges[1::2])]


def tiling_matches(suspect: str, source: str, params: GstParams | None = None) -> list[Tile]:
    """Raw per-round matches, in marking order, before merge and discard."""
    p = params if params is not None else GstParams()
    if len(suspect) > p.max_chars or len(source) > p.max_chars:
        raise InputTooLarge(
            f"text of {max(len(suspect), len(source))} chars exceeds cap {p.max_chars}"
        )
    m, n = len(suspect), len(source)
    if min(m, n) < p.min_match:
        return []
    sus = _codepoints(suspect)
    src = _codepoints(source)

    heap: list[tuple[int, int, int]] = []
    for diag in range(-(m - 1), n):
        sus_lo = max(0, -diag)
        src_lo = sus_lo + diag
        span = min(m - sus_lo, n - src_lo)
        if span < p.min_match:
            continue
        eq = sus[sus_lo : sus_lo + span] == src[src_lo : src_lo + span]
        for start, length in _true_runs(eq):
            if length >= p.min_match:
                heapq.heappush(heap, (-length, sus_lo + start, src_lo + start))

    marked_sus = np.zeros(m, dtype=bool)
    marked_src = np.zeros(n, dtype=bool)
    matches: list[Tile] = []
    while heap:
        neg_length, a, b = heapq.heappop(heap)
        length = -neg_length
        blocked = marked_sus[a : a + length] | marked_src[b : b + length]
        if not blocked.any():
            matches.append(Tile(a, b, length))
            marked_sus[a : a + length] = True
            marked_src[b : b + length] = True
            continue
        for start, sub_length in _true_runs(~blocked):
            if sub_length >= p.min_match:
                heapq.heappush(heap, (-sub_length, a + start, b + start))
    return matches


def merge_tiles(tiles: list[Tile]) -> list[Tile]:
    """Join tiles that sit back-to-back on both the suspect and source side."""
    ordered = sorted(tiles, key=lambda t: t.suspect_offset)
    merged: list[Tile] = []
    for tile in ordered:
        if merged:
            last = merged[-1]
            if (
                last.suspect_offset + last.length == tile.suspect_offset
                and last.source_offset + last.length == tile.source_offset
            ):
                merged[-1] = Tile(
                    last.suspect_offset, last.source_offset, last.length + tile.length
                )
                continue
        merged.append(tile)
    return merged


def gst_tiles(suspect: str, source: str, params: GstParams | None = None) -> list[Tile]:
    """Final tiles on pre-canonicalized text: matched, merged, length-filtered."""
    p = params if params is not None else GstParams()
    merged = merge_tiles(tiling_matches(suspect, source, p))
    return [t for t in merged if t.length >= p.min_tile]


def gst_containment(suspect: str, source: str, params: GstParams | None = None) -> float:
    """Fraction of the canonical suspect text covered by surviving tiles."""
    p = params if params is not None else GstParams()
    canon_sus = canonicalize(suspect)
    canon_src = canonicalize(source)
    if not canon_sus:
        raise EmptySuspect("suspect text is empty once canonicalized")
    tiles = gst_tiles(canon_sus, canon_src, p)
    return sum(t.length for t in tiles) / len(canon_sus)
