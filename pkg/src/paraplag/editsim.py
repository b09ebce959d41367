"""Insert/delete similarity: word-level edit distance between sentences.

Distance counts unit-cost insertions, deletions, and replacements over
token lists (callers pass content-word stems).  Similarity normalizes by
the longer list so the value always lands in [0, 1].
"""

from __future__ import annotations

from collections.abc import Sequence


def word_edit_distance(sp_tokens: Sequence[str], sr_tokens: Sequence[str]) -> int:
    """Minimal number of insert/delete/replace steps turning sp into sr."""
    m, n = len(sp_tokens), len(sr_tokens)
    if m == 0:
        return n
    if n == 0:
        return m
    # Rolling single row keeps memory at O(min side); iterate over the longer.
    if m < n:
        sp_tokens, sr_tokens = sr_tokens, sp_tokens
        m, n = n, m
    row = list(range(n + 1))
    for i in range(1, m + 1):
        prev_diag = row[0]
        row[0] = i
        a = sp_tokens[i - 1]
        for j in range(1, n + 1):
            prev_row = row[j]
            if a == sr_tokens[j - 1]:
                row[j] = prev_diag
            else:
                row[j] = 1 + min(prev_diag, prev_row, row[j - 1])
            prev_diag = prev_row
    return row[n]


def insdel_similarity(sp_tokens: Sequence[str], sr_tokens: Sequence[str]) -> float:
    """1 - distance/max(len); both lists empty count as identical (1.0)."""
    longer = max(len(sp_tokens), len(sr_tokens))
    if longer == 0:
        return 1.0
    return 1.0 - word_edit_distance(sp_tokens, sr_tokens) / longer
