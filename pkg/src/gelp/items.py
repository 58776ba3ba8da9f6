"""Dataset records and their JSON Lines wire format.

Field order in the items file is fixed so that builds are byte-stable:
id, kind, construction, plausibility, load, connectives, target_position,
premise, hypothesis, label, question, correct_answer, template_id, list_id.
Strings are NFC-normalized on write and files end every line with "\\n".
"""
from __future__ import annotations

import json
import os
import tempfile
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

ITEM_FIELDS = (
    "id",
    "kind",
    "construction",
    "plausibility",
    "load",
    "connectives",
    "target_position",
    "premise",
    "hypothesis",
    "label",
    "question",
    "correct_answer",
    "template_id",
    "list_id",
)

KINDS = ("target", "distractor")
TARGET_LOADS = ("low", "medium", "high")
DISTRACTOR_LOADS = ("2prop", "3prop")


class DatasetFormatError(Exception):
    def __init__(self, message: str, path: str | None = None, line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        where = f"{path}:{line_no}: " if path and line_no else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class DatasetItem:
    id: str
    kind: str
    construction: str | None
    plausibility: str | None
    load: str
    connectives: tuple[str, ...]
    target_position: int | None
    premise: str
    hypothesis: str
    label: str
    question: str
    correct_answer: str
    template_id: str
    list_id: str | None = None
    # where the item's randomness came from; never serialized
    seed_provenance: tuple[int, str] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if (self.label == "entailment") != (self.correct_answer == "yes"):
            raise ValueError(
                f"item {self.id}: label {self.label!r} inconsistent "
                f"with correct_answer {self.correct_answer!r}"
            )


@dataclass(frozen=True)
class ExperimentList:
    list_id: str
    item_ids: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.item_ids)) != len(self.item_ids):
            raise ValueError(f"list {self.list_id} repeats item ids")


def _nfc(value: Any) -> Any:
    if isinstance(value, str):
        return unicodedata.normalize("NFC", value)
    if isinstance(value, (list, tuple)):
        return [_nfc(v) for v in value]
    if isinstance(value, dict):
        return {_nfc(k): _nfc(v) for k, v in value.items()}
    return value


def item_to_obj(item: DatasetItem) -> dict[str, Any]:
    return {
        "id": item.id,
        "kind": item.kind,
        "construction": item.construction,
        "plausibility": item.plausibility,
        "load": item.load,
        "connectives": list(item.connectives),
        "target_position": item.target_position,
        "premise": item.premise,
        "hypothesis": item.hypothesis,
        "label": item.label,
        "question": item.question,
        "correct_answer": item.correct_answer,
        "template_id": item.template_id,
        "list_id": item.list_id,
    }


def item_from_obj(obj: dict[str, Any], path: str | None = None, line_no: int | None = None) -> DatasetItem:
    def fail(msg: str):
        raise DatasetFormatError(msg, path, line_no)

    if not isinstance(obj, dict):
        fail("each line must hold a JSON object")
    for f in ITEM_FIELDS:
        if f not in obj:
            fail(f"missing field '{f}'")
    if obj["kind"] not in KINDS:
        fail(f"field 'kind': unknown value {obj['kind']!r}")
    loads = TARGET_LOADS if obj["kind"] == "target" else DISTRACTOR_LOADS
    if obj["load"] not in loads:
        fail(f"field 'load': unknown value {obj['load']!r} for kind {obj['kind']}")
    if obj["label"] not in ("entailment", "non_entailment"):
        fail(f"field 'label': unknown value {obj['label']!r}")
    if obj["correct_answer"] not in ("yes", "no"):
        fail(f"field 'correct_answer': unknown value {obj['correct_answer']!r}")
    if (obj["label"] == "entailment") != (obj["correct_answer"] == "yes"):
        fail(
            f"field 'correct_answer': {obj['correct_answer']!r} inconsistent "
            f"with label {obj['label']!r}"
        )
    if not isinstance(obj["connectives"], list) or not all(
        isinstance(c, str) for c in obj["connectives"]
    ):
        fail("field 'connectives': expected a list of strings")
    if obj["target_position"] is not None and not isinstance(obj["target_position"], int):
        fail("field 'target_position': expected an integer or null")
    for f in ("id", "premise", "hypothesis", "question", "template_id"):
        if not isinstance(obj[f], str) or not obj[f]:
            fail(f"field '{f}': expected a non-empty string")
    return DatasetItem(
        id=obj["id"],
        kind=obj["kind"],
        construction=obj["construction"],
        plausibility=obj["plausibility"],
        load=obj["load"],
        connectives=tuple(obj["connectives"]),
        target_position=obj["target_position"],
        premise=obj["premise"],
        hypothesis=obj["hypothesis"],
        label=obj["label"],
        question=obj["question"],
        correct_answer=obj["correct_answer"],
        template_id=obj["template_id"],
        list_id=obj["list_id"],
    )


def write_jsonl(path: str | Path, objs: Iterable[dict[str, Any]]) -> Path:
    """Atomic JSONL write: temp file in the target directory, then rename."""
    path = Path(path)
    parent = path.parent
    if not parent.is_dir():
        raise DatasetFormatError(f"output directory does not exist: {parent}", str(path))
    fd, tmp_name = tempfile.mkstemp(dir=parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for obj in objs:
                fh.write(json.dumps(_nfc(obj), ensure_ascii=False, separators=(",", ":")))
                fh.write("\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def read_jsonl(path: str | Path) -> Iterable[tuple[int, dict[str, Any]]]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetFormatError(f"invalid JSON: {e.msg}", str(path), line_no) from None
            yield line_no, obj


def read_items(path: str | Path) -> list[DatasetItem]:
    """Parse an items file, re-validating schema and label consistency."""
    items = []
    seen: set[str] = set()
    for line_no, obj in read_jsonl(path):
        item = item_from_obj(obj, str(path), line_no)
        if item.id in seen:
            raise DatasetFormatError(f"duplicate item id {item.id!r}", str(path), line_no)
        seen.add(item.id)
        items.append(item)
    return items


def read_lists(path: str | Path, expected_size: int = 96) -> list[ExperimentList]:
    lists = []
    seen: set[str] = set()
    for line_no, obj in read_jsonl(path):
        if "list_id" not in obj or "item_ids" not in obj:
            raise DatasetFormatError("missing field 'list_id' or 'item_ids'", str(path), line_no)
        if obj["list_id"] in seen:
            raise DatasetFormatError(f"duplicate list id {obj['list_id']!r}", str(path), line_no)
        seen.add(obj["list_id"])
        ids = obj["item_ids"]
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise DatasetFormatError("field 'item_ids': expected a list of strings", str(path), line_no)
        if expected_size and len(ids) != expected_size:
            raise DatasetFormatError(
                f"list {obj['list_id']} has {len(ids)} items, expected {expected_size}",
                str(path),
                line_no,
            )
        lists.append(ExperimentList(obj["list_id"], tuple(ids)))
    return lists
