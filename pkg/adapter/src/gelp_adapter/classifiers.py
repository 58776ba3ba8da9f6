"""Classifier backends behind one batch interface.

A classifier is called with a list of (premise, hypothesis) pairs and
returns one raw label per pair; its .meta dict is copied into every
prediction record. Model references select a backend:

    stub:<label>                the same raw label for every pair
    stub:cycle:<l1>,<l2>,...    labels assigned by item order, repeating
    overlap                     lexical-overlap heuristic baseline
    hf:<model-name-or-path>     a transformers sequence classifier
"""

import re

from .labels import RAW_LABELS


class ClassifierError(Exception):
    pass


_STUB_OK = set(RAW_LABELS) | {"non_entailment"}


class StubClassifier:
    """Scripted labels for plumbing tests; cycles by global item order."""

    def __init__(self, labels: list[str]):
        if not labels:
            raise ClassifierError("stub needs at least one label")
        bad = [lab for lab in labels if lab not in _STUB_OK]
        if bad:
            raise ClassifierError(f"unknown stub label {bad[0]!r}")
        self.labels = list(labels)
        self._served = 0
        self.meta = {"classifier": "stub", "cycle": list(self.labels)}

    def __call__(self, pairs: list[tuple[str, str]]) -> list[str]:
        out = []
        for _ in pairs:
            out.append(self.labels[self._served % len(self.labels)])
            self._served += 1
        return out


_WORD = re.compile(r"[a-z]+")


def _words(text: str) -> list[str]:
    return _WORD.findall(text.lower())


class OverlapClassifier:
    """Entailment iff every hypothesis word occurs in the premise.

    The classic lexical-overlap heuristic. Argument-swapped hypotheses
    reuse exactly the premise's words, so this baseline calls them all
    entailment; that blind spot is the behavior the item set probes.
    """

    meta = {"classifier": "overlap"}

    def __call__(self, pairs: list[tuple[str, str]]) -> list[str]:
        out = []
        for premise, hypothesis in pairs:
            covered = set(_words(hypothesis)) <= set(_words(premise))
            out.append("entailment" if covered else "non_entailment")
        return out


# model config label names vary; normalize the usual spellings
_HF_LABEL_MAP = {
    "entailment": "entailment",
    "neutral": "neutral",
    "contradiction": "contradiction",
    "not_entailment": "non_entailment",
    "non_entailment": "non_entailment",
}


class HFClassifier:
    """transformers sequence classifier in eval mode, greedy argmax."""

    def __init__(self, name: str, batch_size: int):
        try:
            import torch
            from transformers import (
                AutoModelForSequenceClassification,
                AutoTokenizer,
            )
        except ImportError as exc:
            raise ClassifierError(
                "hf: references need the optional extras: pip install gelp-adapter[hf]"
            ) from exc
        torch.manual_seed(0)
        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(name)
        self.model = AutoModelForSequenceClassification.from_pretrained(name)
        self.model.eval()
        self.batch_size = batch_size
        self.id2label = {
            int(i): str(lab).lower() for i, lab in self.model.config.id2label.items()
        }
        self.meta = {
            "classifier": "hf",
            "model": name,
            "n_layers": getattr(self.model.config, "num_hidden_layers", None),
            "n_heads": getattr(self.model.config, "num_attention_heads", None),
        }

    def __call__(self, pairs: list[tuple[str, str]]) -> list[str]:
        out: list[str] = []
        with self._torch.no_grad():
            for start in range(0, len(pairs), self.batch_size):
                chunk = pairs[start : start + self.batch_size]
                enc = self.tokenizer(
                    [p for p, _ in chunk],
                    [h for _, h in chunk],
                    return_tensors="pt",
                    padding=True,
                    truncation=True,
                )
                logits = self.model(**enc).logits
                for idx in logits.argmax(dim=-1).tolist():
                    name = self.id2label[idx]
                    if name not in _HF_LABEL_MAP:
                        raise ClassifierError(
                            f"model label {name!r} has no mapping to the NLI scheme"
                        )
                    out.append(_HF_LABEL_MAP[name])
        return out


def resolve(ref: str, batch_size: int = 32):
    """Turn a model reference string into a classifier instance."""
    if ref.startswith("stub:"):
        spec = ref[len("stub:") :]
        if spec.startswith("cycle:"):
            labels = [s.strip() for s in spec[len("cycle:") :].split(",") if s.strip()]
        else:
            labels = [spec]
        return StubClassifier(labels)
    if ref == "overlap":
        return OverlapClassifier()
    if ref.startswith("hf:"):
        return HFClassifier(ref[len("hf:") :], batch_size)
    raise ClassifierError(
        f"unknown model reference {ref!r}; "
        "use stub:<label>, stub:cycle:<l1,l2,...>, overlap, or hf:<name>"
    )
