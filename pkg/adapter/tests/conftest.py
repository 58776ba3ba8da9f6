import json

import pytest

# ten targets (five entailment, five swapped) plus two distractor rows,
# written in the items-file schema the generator emits
CAST = [
    ("boy", "ball", "kicked", "kick"),
    ("girl", "apple", "washed", "wash"),
    ("man", "shelf", "assembled", "assemble"),
    ("woman", "stone", "lifted", "lift"),
    ("farmer", "fence", "painted", "paint"),
]


def _target(k: int) -> dict:
    subject, obj, past, base = CAST[k % len(CAST)]
    identical = k < 5
    premise = f"The {subject} {past} the {obj}."
    hypothesis = premise if identical else f"The {obj} {past} the {subject}."
    q_subject, q_object = (subject, obj) if identical else (obj, subject)
    return {
        "id": f"t-transitive-v{k:02d}.0-plaus-{'ident' if identical else 'swap'}-low",
        "kind": "target",
        "construction": "transitive",
        "plausibility": "plausible",
        "load": "low",
        "connectives": [],
        "target_position": 1,
        "premise": premise,
        "hypothesis": hypothesis,
        "label": "entailment" if identical else "non_entailment",
        "question": f"Did the {q_subject} {base} the {q_object}?",
        "correct_answer": "yes" if identical else "no",
        "template_id": "low",
        "list_id": "list_000",
    }


def _distractor(k: int) -> dict:
    return {
        "id": f"d-2prop-yes-{k:04d}",
        "kind": "distractor",
        "construction": None,
        "plausibility": None,
        "load": "2prop",
        "connectives": ["and"],
        "target_position": 1,
        "premise": "The singer greeted the judge and the baker thanked the tailor.",
        "hypothesis": "The singer greeted the judge.",
        "label": "entailment",
        "question": "Did the singer greet the judge?",
        "correct_answer": "yes",
        "template_id": "dis2:med:and:target_first",
        "list_id": "list_000",
    }


@pytest.fixture()
def items_file(tmp_path):
    """10 targets and 2 distractors, in the generator's JSONL schema."""
    path = tmp_path / "gelp.items.jsonl"
    rows = [_target(k) for k in range(10)]
    rows.insert(3, _distractor(0))
    rows.append(_distractor(1))
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return path


@pytest.fixture()
def target_rows(items_file):
    with open(items_file, encoding="utf-8") as fh:
        rows = [json.loads(line) for line in fh]
    return [r for r in rows if r["kind"] == "target"]
