"""Corpus loaders: labelled suspect/source passage pairs from disk.

Two on-disk layouts are understood: the crowd-corpus layout (flat
directory of ``<n>-original.txt`` / ``<n>-paraphrase.txt`` /
``<n>-metadata.txt`` triples) and the short-answer corpus layout (five
``orig_task<x>.txt`` prompts, one answer file per writer, and a
delimited truth table naming each answer's rewrite category).  Either
loader produces the same in-memory pairs, which also round-trip through
a JSON-lines interchange file so synthetic datasets can be fed to the
evaluation pipeline without inventing a directory layout.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import MissingFile, ParaplagError

PARAPHRASED = "paraphrased"
NOT_PARAPHRASED = "not_paraphrased"

# verdict values accepted in crowd metadata files
_TRUE_WORDS = frozenset({"yes", "true", "1"})
_FALSE_WORDS = frozenset({"no", "false", "0"})

# rewrite-category prefixes and the label each one carries
_CATEGORY_LABELS = {
    "light": PARAPHRASED,
    "heavy": PARAPHRASED,
    "cut": NOT_PARAPHRASED,
    "near": NOT_PARAPHRASED,
    "non": NOT_PARAPHRASED,
}

_METADATA_RE = re.compile(r"^\s*paraphrase\s*[:=]\s*(\S+)\s*$", re.IGNORECASE)
_ORIGINAL_RE = re.compile(r"^(\d+)-original\.txt$")


class MetadataParse(ParaplagError):
    """Pair metadata is absent or holds no usable verdict."""


class UnknownCategory(ParaplagError):
    """Truth table names a rewrite category outside the known set."""


@dataclass(frozen=True)
class LabelledPair:
    pair_id: str
    suspect_text: str
    source_text: str
    label: str
    origin: str
    raw_category: str

    def __post_init__(self):
        if self.label not in (PARAPHRASED, NOT_PARAPHRASED):
            raise ValueError(f"label must be paraphrased/not_paraphrased, got {self.label!r}")
        if not self.suspect_text.strip() or not self.source_text.strip():
            raise ValueError(f"pair {self.pair_id}: texts must be non-empty")

    @property
    def is_paraphrased(self) -> bool:
        return self.label == PARAPHRASED

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "suspect_text": self.suspect_text,
            "source_text": self.source_text,
            "label": self.label,
            "origin": self.origin,
            "raw_category": self.raw_category,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LabelledPair":
        return cls(
            pair_id=payload["pair_id"],
            suspect_text=payload["suspect_text"],
            source_text=payload["source_text"],
            label=payload["label"],
            origin=payload["origin"],
            raw_category=payload["raw_category"],
        )


def _read_text(path: Path) -> str:
    # crowd-sourced files carry occasional stray bytes; keep the rest
    return path.read_text(encoding="utf-8", errors="replace")


def count_labels(pairs: list[LabelledPair]) -> tuple[int, int, int]:
    """(total, paraphrased, not_paraphrased)."""
    positive = sum(1 for p in pairs if p.is_paraphrased)
    return len(pairs), positive, len(pairs) - positive


# ---------------------------------------------------------------------------
# Crowd corpus


def _parse_metadata(path: Path, pair_id: str) -> tuple[str, str]:
    """(label, raw verdict word) from a metadata file's paraphrase line."""
    if not path.is_file():
        raise MetadataParse(f"pair {pair_id}: metadata file missing: {path}")
    for line in _read_text(path).splitlines():
        matched = _METADATA_RE.match(line)
        if not matched:
            continue
        word = matched.group(1).lower()
        if word in _TRUE_WORDS:
            return PARAPHRASED, word
        if word in _FALSE_WORDS:
            return NOT_PARAPHRASED, word
        raise MetadataParse(f"pair {pair_id}: unrecognized verdict {word!r}")
    raise MetadataParse(f"pair {pair_id}: no paraphrase line in {path}")


def load_crowd(directory) -> list[LabelledPair]:
    """Every pair in a crowd-layout directory, ordered by pair number."""
    root = Path(directory)
    if not root.is_dir():
        raise MissingFile(f"corpus directory not found: {root}")
    numbers = sorted(
        int(m.group(1))
        for entry in root.iterdir()
        if (m := _ORIGINAL_RE.match(entry.name))
    )
    pairs = []
    for number in numbers:
        original = root / f"{number}-original.txt"
        paraphrase = root / f"{number}-paraphrase.txt"
        if not paraphrase.is_file():
            raise MissingFile(f"pair {number}: paraphrase file missing: {paraphrase}")
        label, raw = _parse_metadata(root / f"{number}-metadata.txt", str(number))
        pairs.append(
            LabelledPair(
                pair_id=str(number),
                suspect_text=_read_text(paraphrase),
                source_text=_read_text(original),
                label=label,
                origin="crowd",
                raw_category=raw,
            )
        )
    return pairs


# ---------------------------------------------------------------------------
# Short-answer corpus


def _category_label(category: str) -> str:
    lowered = category.strip().lower()
    for prefix, label in _CATEGORY_LABELS.items():
        if lowered.startswith(prefix):
            return label
    raise UnknownCategory(f"unrecognized rewrite category {category!r}")


def _task_letter(task: str) -> str:
    lowered = task.strip().lower()
    if lowered.startswith("task"):
        lowered = lowered[len("task") :]
    if len(lowered) != 1 or not lowered.isalpha():
        raise ValueError(f"task field must name a single task letter, got {task!r}")
    return lowered


def _truth_rows(truth_path: Path) -> list[tuple[str, str, str]]:
    rows = []
    for line in _read_text(truth_path).splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in re.split(r"[,\t]", stripped)]
        if fields[0].lower() == "file":  # header row
            continue
        if len(fields) < 3:
            raise ValueError(f"truth row needs file, task, category: {line!r}")
        rows.append((fields[0], fields[1], fields[2]))
    return rows


def load_clough_stevenson(directory, truth_file) -> list[LabelledPair]:
    """Answer-vs-prompt pairs labelled through the ground-truth table."""
    root = Path(directory)
    if not root.is_dir():
        raise MissingFile(f"corpus directory not found: {root}")
    truth_path = Path(truth_file)
    if not truth_path.is_file():
        raise MissingFile(f"truth table not found: {truth_path}")

    originals: dict[str, str] = {}
    pairs = []
    for answer_name, task, category in sorted(_truth_rows(truth_path)):
        answer_path = root / answer_name
        if not answer_path.is_file():
            raise MissingFile(f"answer file missing: {answer_path}")
        letter = _task_letter(task)
        if letter not in originals:
            original_path = root / f"orig_task{letter}.txt"
            if not original_path.is_file():
                raise MissingFile(f"original task file missing: {original_path}")
            originals[letter] = _read_text(original_path)
        pairs.append(
            LabelledPair(
                pair_id=Path(answer_name).stem,
                suspect_text=_read_text(answer_path),
                source_text=originals[letter],
                label=_category_label(category),
                origin="clough_stevenson",
                raw_category=category.strip().lower(),
            )
        )
    return pairs


# ---------------------------------------------------------------------------
# JSON-lines interchange


def save_pairs_jsonl(pairs: list[LabelledPair], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(pair.to_dict(), sort_keys=True))
            fh.write("\n")


def load_pairs_jsonl(path) -> list[LabelledPair]:
    jsonl_path = Path(path)
    if not jsonl_path.is_file():
        raise MissingFile(f"pairs file not found: {jsonl_path}")
    pairs = []
    with open(jsonl_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                pairs.append(LabelledPair.from_dict(json.loads(line)))
    return pairs
