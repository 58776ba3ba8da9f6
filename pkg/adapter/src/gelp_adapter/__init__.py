"""Adapter between NLI classifiers and the entailment suite's file formats.

Reads an items JSONL, runs a classifier over the target premise/hypothesis
pairs, and writes the predictions JSONL the scoring tool consumes.
"""

from .labels import RAW_LABELS, collapse_label, to_binary
from .predict import ItemsFormatError, predict_items

__all__ = [
    "RAW_LABELS",
    "collapse_label",
    "to_binary",
    "ItemsFormatError",
    "predict_items",
]
