"""Three-way NLI labels and the collapse onto the binary scheme."""

RAW_LABELS = ("entailment", "neutral", "contradiction")

BINARY_LABELS = ("entailment", "non_entailment")

_COLLAPSE = {
    "entailment": "entailment",
    "neutral": "non_entailment",
    "contradiction": "non_entailment",
}


def collapse_label(raw: str) -> str:
    """Binary scheme: non-entailment covers both neutral and contradiction."""
    try:
        return _COLLAPSE[raw]
    except KeyError:
        raise ValueError(f"unknown raw label {raw!r}") from None


def to_binary(raw: str) -> str:
    """Like collapse_label, but lets two-way classifiers bypass the collapse."""
    if raw == "non_entailment":
        return raw
    return collapse_label(raw)
