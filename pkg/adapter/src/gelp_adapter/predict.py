"""Run a classifier over an items file and write the predictions JSONL."""

import json
import os
from pathlib import Path

from .classifiers import resolve
from .labels import to_binary

# the slice of the items schema the adapter actually needs
REQUIRED_FIELDS = ("id", "kind", "premise", "hypothesis")


class ItemsFormatError(ValueError):
    pass


def read_target_items(path: str | Path) -> list[dict]:
    """Target rows only; distractors carry no premise/hypothesis pair."""
    targets = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ItemsFormatError(
                    f"{path}:{line_no}: not valid JSON: {exc}"
                ) from None
            if "kind" not in obj:
                raise ItemsFormatError(f"{path}:{line_no}: missing field 'kind'")
            if obj["kind"] != "target":
                continue
            missing = [f for f in REQUIRED_FIELDS if f not in obj]
            if missing:
                raise ItemsFormatError(
                    f"{path}:{line_no}: missing field {missing[0]!r}"
                )
            targets.append(obj)
    return targets


def predict_items(
    items_path: str | Path,
    model_ref: str,
    out_path: str | Path,
    batch_size: int = 32,
) -> int:
    """Write one prediction per target item, in items-file order.

    The output is published atomically (tmp file + rename), so a crashed
    run never leaves a half-written predictions file behind.
    """
    classifier = resolve(model_ref, batch_size)
    targets = read_target_items(items_path)
    pairs = [(t["premise"], t["hypothesis"]) for t in targets]
    raw: list[str] = []
    for start in range(0, len(pairs), batch_size):
        raw.extend(classifier(pairs[start : start + batch_size]))
    assert len(raw) == len(targets)

    out_path = Path(out_path)
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    with open(tmp_path, "w", encoding="utf-8") as fh:
        for target, raw_label in zip(targets, raw):
            record = {
                "item_id": target["id"],
                "predicted": to_binary(raw_label),
                "raw_label": raw_label,
                "model_meta": classifier.meta,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    os.replace(tmp_path, out_path)
    return len(targets)
