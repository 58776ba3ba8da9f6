"""Accuracy and human-model matching over collected responses.

Each item is answered by exactly three annotators; the human answer for an
item is the majority vote.  Human accuracy compares majorities to correct
answers, model accuracy compares predictions to correct answers, and the
matching score compares predictions to majorities.  Every number comes
with a binomial standard error so it can be reported as estimate plus
uncertainty.
"""
from __future__ import annotations

import json
import math
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .items import DatasetItem

ANSWERS = ("yes", "no")

# prediction files carry NLI labels; responses carry yes/no
LABEL_TO_ANSWER = {"entailment": "yes", "non_entailment": "no"}


class ScoringError(Exception):
    pass


@dataclass(frozen=True)
class Score:
    """A proportion with its binomial standard error and count."""

    value: float
    se: float
    n: int

    def as_obj(self) -> dict:
        return {"value": self.value, "se": self.se, "n": self.n}


def binomial_se(p: float, n: int) -> float:
    if n <= 0:
        raise ScoringError("standard error needs a positive sample size")
    return math.sqrt(p * (1.0 - p) / n)


def proportion(successes: int, n: int) -> Score:
    if n <= 0:
        raise ScoringError("proportion needs a positive sample size")
    p = successes / n
    return Score(p, binomial_se(p, n), n)


def majority_answer(answers: list[str]) -> str:
    """Strict majority of an odd number of yes/no responses."""
    if not answers:
        raise ScoringError("no responses to take a majority of")
    if len(answers) % 2 == 0:
        raise ScoringError(f"even response count {len(answers)} has no strict majority")
    bad = [a for a in answers if a not in ANSWERS]
    if bad:
        raise ScoringError(f"unexpected answer value {bad[0]!r}")
    counts = Counter(answers)
    return "yes" if counts["yes"] > counts["no"] else "no"


def collect_majorities(
    responses: dict[str, list[str]],
    expected_per_item: int = 3,
    warn=lambda msg: print(msg, file=sys.stderr),
) -> dict[str, str]:
    """Majority answer per item id, skipping items without a full set.

    Items with more or fewer than expected_per_item responses are excluded
    with a warning rather than silently folded in; an abandoned list that
    was later re-served can leave a few of those behind.
    """
    majorities = {}
    skipped = 0
    for item_id in sorted(responses):
        answers = responses[item_id]
        if len(answers) != expected_per_item:
            skipped += 1
            warn(
                f"warning: item {item_id} has {len(answers)} responses, "
                f"expected {expected_per_item}; excluded"
            )
            continue
        majorities[item_id] = majority_answer(answers)
    if skipped:
        warn(f"warning: {skipped} items excluded from scoring")
    return majorities


# ------------------------------------------------------------- metrics

def accuracy(majorities: dict[str, str], items: dict[str, DatasetItem]) -> Score:
    """Share of items whose majority answer matches the correct answer."""
    missing = sorted(set(majorities) - set(items))
    if missing:
        raise ScoringError(f"responses for unknown items, first: {missing[0]}")
    hits = sum(1 for item_id, ans in majorities.items() if ans == items[item_id].correct_answer)
    return proportion(hits, len(majorities))


def _mapped(predictions: dict[str, str], item_id: str) -> str:
    label = predictions[item_id]
    if label not in LABEL_TO_ANSWER:
        raise ScoringError(f"prediction for {item_id} has unknown label {label!r}")
    return LABEL_TO_ANSWER[label]


def _require_predictions(item_ids, predictions: dict[str, str]) -> None:
    missing = sorted(i for i in item_ids if i not in predictions)
    if missing:
        head = ", ".join(missing[:5])
        raise ScoringError(f"{len(missing)} items lack predictions: {head}")


def model_accuracy(
    item_ids: list[str], predictions: dict[str, str], items: dict[str, DatasetItem]
) -> Score:
    """Share of items whose mapped prediction matches the correct answer."""
    if not item_ids:
        raise ScoringError("empty item set")
    _require_predictions(item_ids, predictions)
    hits = sum(
        1 for i in item_ids if _mapped(predictions, i) == items[i].correct_answer
    )
    return proportion(hits, len(item_ids))


def matching_score(majorities: dict[str, str], predictions: dict[str, str]) -> Score:
    """Share of items where the model prediction equals the human majority.

    Predictions carry NLI labels, humans answer yes or no; entailment maps
    to yes.  A missing prediction for a scored item is an error, not a
    miss.
    """
    if not majorities:
        raise ScoringError("empty item set")
    _require_predictions(majorities, predictions)
    hits = sum(1 for i, human in majorities.items() if _mapped(predictions, i) == human)
    return proportion(hits, len(majorities))


# ------------------------------------------------------------ breakdowns

# dimension values fix the report row order
BREAKDOWN_DIMENSIONS = {
    "plausibility": ("plausible", "implausible"),
    "construction": (
        "transitive",
        "passive",
        "doc",
        "dative",
        "benefactive_doc",
        "benefactive_for",
        "experiencer_subject",
        "experiencer_object",
    ),
    "load": ("low", "medium", "high"),
    "answer": ("yes", "no"),
}


def _item_value(item: DatasetItem, dimension: str) -> str:
    if dimension == "answer":
        return item.correct_answer
    return getattr(item, dimension)


def group_items(
    item_ids, items: dict[str, DatasetItem], dimension: str
) -> dict[str, list[str]]:
    """Partition target items by one dimension or a crossing like
    "load*answer"; distractors carry no construction or plausibility and
    stay out of breakdowns."""
    parts = dimension.split("*")
    for part in parts:
        if part not in BREAKDOWN_DIMENSIONS:
            raise ScoringError(f"unknown breakdown dimension {part!r}")
    groups: dict[str, list[str]] = {}
    for item_id in item_ids:
        item = items.get(item_id)
        if item is None:
            raise ScoringError(f"responses for unknown item {item_id!r}")
        if item.kind != "target":
            continue
        key = "*".join(_item_value(item, part) for part in parts)
        groups.setdefault(key, []).append(item_id)
    combos: list[tuple[str, ...]] = [()]
    for part in parts:
        combos = [c + (v,) for c in combos for v in BREAKDOWN_DIMENSIONS[part]]
    ordered = ["*".join(c) for c in combos]
    return {g: groups[g] for g in ordered if g in groups}


DEFAULT_DIMENSIONS = ("plausibility", "construction", "load", "answer", "load*answer")

ReportRow = tuple[str, str, str, Score]  # metric, dimension, group, score


def model_scope(
    majorities: dict[str, str], items: dict[str, DatasetItem]
) -> dict[str, str]:
    """Model metrics run over target items only.

    Distractors are a human-side attention control; prediction files carry
    one record per target, so scoring a model against distractor majorities
    would always error on missing predictions.
    """
    scoped = {i: m for i, m in majorities.items() if items[i].kind == "target"}
    if not scoped:
        raise ScoringError(
            "predictions given but no target item has a complete response set"
        )
    return scoped


def build_report(
    majorities: dict[str, str],
    items: dict[str, DatasetItem],
    predictions: dict[str, str] | None = None,
    dimensions: tuple[str, ...] = DEFAULT_DIMENSIONS,
) -> list[ReportRow]:
    """Rows of (metric, dimension, group, score).

    Human accuracy is always reported, over every scored item; model
    accuracy and the matching score join when predictions are given,
    computed over the target items.  Every metric leads with an overall
    row and is then split by each requested dimension.
    """
    rows: list[ReportRow] = []

    def emit(metric: str, scope: dict[str, str], fn) -> None:
        rows.append((metric, "overall", "all", fn(sorted(scope))))
        for dimension in dimensions:
            for group, ids in group_items(scope, items, dimension).items():
                rows.append((metric, dimension, group, fn(ids)))

    emit(
        "human_accuracy",
        majorities,
        lambda ids: accuracy({i: majorities[i] for i in ids}, items),
    )
    if predictions is not None:
        scoped = model_scope(majorities, items)
        emit(
            "model_accuracy",
            scoped,
            lambda ids: model_accuracy(ids, predictions, items),
        )
        emit(
            "matching",
            scoped,
            lambda ids: matching_score({i: majorities[i] for i in ids}, predictions),
        )
    return rows


def model_grid(
    majorities: dict[str, str],
    items: dict[str, DatasetItem],
    model_predictions: dict[str, dict[str, str]],
) -> list[ReportRow]:
    """Matching score plus accuracy-by-load for several models at once.

    Rows are (model, metric, group, score); models keep their given order
    so a layers-by-heads sweep prints in sweep order.  Like build_report,
    model metrics cover target items only.
    """
    scoped = model_scope(majorities, items)
    scored = sorted(scoped)
    rows: list[ReportRow] = []
    for model_name, preds in model_predictions.items():
        rows.append((model_name, "matching", "all", matching_score(scoped, preds)))
        rows.append((model_name, "model_accuracy", "all", model_accuracy(scored, preds, items)))
        for group, ids in group_items(scored, items, "load").items():
            rows.append((model_name, "model_accuracy", group, model_accuracy(ids, preds, items)))
    return rows


# ---------------------------------------------------------------- inputs

def read_responses(path: str | Path) -> dict[str, list[str]]:
    """Collect answers per item from a response file.

    Accepts either the experiment server's event log (response events
    carry type == "response"; other event types are skipped) or a bare
    JSONL of response records.  Duplicate (worker, item) pairs collapse to
    the first answer.
    """
    path = Path(path)
    responses: dict[str, list[str]] = {}
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScoringError(f"{path}:{line_no}: not valid JSON: {exc}") from exc
            if obj.get("type") not in (None, "response"):
                continue  # qualification, assignment, expiry events
            for fieldname in ("worker_id", "item_id", "response"):
                if fieldname not in obj:
                    raise ScoringError(f"{path}:{line_no}: missing field {fieldname!r}")
            if obj["response"] not in ANSWERS:
                raise ScoringError(f"{path}:{line_no}: bad response {obj['response']!r}")
            key = (obj["worker_id"], obj["item_id"])
            if key in seen:
                continue
            seen.add(key)
            responses.setdefault(obj["item_id"], []).append(obj["response"])
    return responses


def read_predictions(path: str | Path) -> dict[str, str]:
    """JSONL of {"item_id": ..., "predicted": ...} model predictions."""
    path = Path(path)
    preds: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScoringError(f"{path}:{line_no}: not valid JSON: {exc}") from exc
            if "item_id" not in obj or "predicted" not in obj:
                raise ScoringError(
                    f"{path}:{line_no}: need fields 'item_id' and 'predicted'"
                )
            if obj["predicted"] not in LABEL_TO_ANSWER:
                raise ScoringError(f"{path}:{line_no}: unknown label {obj['predicted']!r}")
            if obj["item_id"] in preds:
                raise ScoringError(f"{path}:{line_no}: duplicate prediction for {obj['item_id']!r}")
            preds[obj["item_id"]] = obj["predicted"]
    return preds


# ---------------------------------------------------------------- outputs

def write_report_tsv(rows: list[ReportRow], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("metric\tdimension\tgroup\tvalue\tse\tn\n")
        for metric, dimension, group, score in rows:
            fh.write(
                f"{metric}\t{dimension}\t{group}\t{score.value:.6f}\t{score.se:.6f}\t{score.n}\n"
            )
    return path


def write_model_grid_tsv(rows: list[ReportRow], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("model\tmetric\tgroup\tvalue\tse\tn\n")
        for model_name, metric, group, score in rows:
            fh.write(
                f"{model_name}\t{metric}\t{group}\t{score.value:.6f}\t{score.se:.6f}\t{score.n}\n"
            )
    return path


def write_plotdata(rows: list[ReportRow], path: str | Path) -> Path:
    """The same report as nested JSON, for plotting scripts."""
    path = Path(path)
    data: dict[str, dict] = {}
    for metric, dimension, group, score in rows:
        data.setdefault(metric, {}).setdefault(dimension, {})[group] = score.as_obj()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    return path
