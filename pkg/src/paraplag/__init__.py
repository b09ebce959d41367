"""Paraphrase-plagiarism detection engine.

Scores suspect/source passage pairs along three sentence-similarity
dimensions (semantic, word-order, insert-delete), fuses the scores with
small classifiers, and ships a character string-tiling baseline for
comparison.
"""

from .errors import ParaplagError

__version__ = "0.1.0"

__all__ = ["ParaplagError", "__version__"]
