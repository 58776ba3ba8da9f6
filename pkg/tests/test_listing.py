"""Dataset assembly, list partitioning, and the derived-seed RNG."""
import json
import re
from collections import Counter
from dataclasses import replace

import pytest

from gelp.composer import HIGH_TEMPLATES, MEDIUM_TEMPLATES
from gelp.constructions import CONSTRUCTIONS
from gelp.listing import (
    BuildConfig,
    ListingError,
    assign_list_ids,
    build_dataset,
    build_qualification,
    partition_lists,
    read_dataset,
    rng_for,
    write_dataset,
)

SEED = 42


@pytest.fixture(scope="module")
def items(lex, bank):
    return build_dataset(lex, bank, master_seed=SEED)


@pytest.fixture(scope="module")
def lists(items):
    return partition_lists(items, master_seed=SEED)


# ------------------------------------------------------------- rng_for


def test_rng_for_is_deterministic():
    a = rng_for(7, "medium", "x")
    b = rng_for(7, "medium", "x")
    assert [a.random() for _ in range(5)] == [b.random() for _ in range(5)]


def test_rng_for_paths_are_independent():
    seqs = {
        name: tuple(rng_for(*args).random() for _ in range(4))
        for name, args in {
            "a": (7, "medium", "x"),
            "b": (7, "medium", "y"),
            "c": (7, "high", "x"),
            "d": (8, "medium", "x"),
        }.items()
    }
    assert len(set(seqs.values())) == 4


# ------------------------------------------------------------- counts


def test_build_total_counts(items):
    assert len(items) == 15360
    targets = [i for i in items if i.kind == "target"]
    distractors = [i for i in items if i.kind == "distractor"]
    assert len(targets) == 7680
    assert len(distractors) == 7680

    by_load = Counter(i.load for i in targets)
    assert by_load == {"low": 2560, "medium": 2560, "high": 2560}

    cell = Counter((i.construction, i.load) for i in targets)
    assert all(n == 320 for n in cell.values()) and len(cell) == 24

    labels = Counter(i.label for i in targets)
    assert labels == {"entailment": 3840, "non_entailment": 3840}

    answers = Counter(i.correct_answer for i in targets)
    assert answers == {"yes": 3840, "no": 3840}


def test_low_premise_plausibility_split(items):
    low = [i for i in items if i.kind == "target" and i.load == "low"]
    texts = {
        plaus: {(i.construction, i.premise) for i in low if i.plausibility == plaus}
        for plaus in ("plausible", "implausible")
    }
    assert len(texts["plausible"]) == 640
    assert len(texts["implausible"]) == 640
    assert not (texts["plausible"] & texts["implausible"])


def test_distractor_counts(items):
    distractors = [i for i in items if i.kind == "distractor"]
    split = Counter((i.load, i.correct_answer) for i in distractors)
    assert split == {
        ("2prop", "yes"): 1280,
        ("2prop", "no"): 1280,
        ("3prop", "yes"): 2560,
        ("3prop", "no"): 2560,
    }
    assert all(i.construction is None and i.plausibility is None for i in distractors)


def test_target_id_scheme(items):
    pat = re.compile(
        r"^t-(%s)-v([0-3][0-9])\.([01])-(plaus|implaus)-(ident|swap)-(low|medium|high)$"
        % "|".join(CONSTRUCTIONS)
    )
    targets = [i for i in items if i.kind == "target"]
    seen = set()
    for item in targets:
        m = pat.match(item.id)
        assert m, item.id
        assert m.group(1) == item.construction
        assert int(m.group(2)) < 40
        assert m.group(4) == ("plaus" if item.plausibility == "plausible" else "implaus")
        assert m.group(6) == item.load
        seen.add(item.id)
    assert len(seen) == 7680


def test_distractor_id_scheme(items):
    pat = re.compile(r"^d-(2|3)prop-(yes|no)-(\d{4})$")
    for item in (i for i in items if i.kind == "distractor"):
        m = pat.match(item.id)
        assert m, item.id
        assert f"{m.group(1)}prop" == item.load
        assert m.group(2) == item.correct_answer


def test_ident_swap_pair_one_entailment(items):
    # within one premise variant the two hypothesis items disagree on label
    targets = {i.id: i for i in items if i.kind == "target"}
    for item_id, item in targets.items():
        if "-ident-" not in item_id:
            continue
        partner = targets[item_id.replace("-ident-", "-swap-")]
        assert {item.label, partner.label} == {"entailment", "non_entailment"}
        if item.load == "low":
            assert item.premise == partner.premise


def test_medium_template_allocation(items):
    med = [i for i in items if i.kind == "target" and i.load == "medium"]
    counts = Counter(i.template_id for i in med)
    assert set(counts) == {t.template_id for t in MEDIUM_TEMPLATES}
    assert all(n == 256 for n in counts.values())


def test_high_template_allocation(items):
    high = [i for i in items if i.kind == "target" and i.load == "high"]
    counts = Counter(i.template_id for i in high)
    assert set(counts) == {t.template_id for t in HIGH_TEMPLATES}
    # 2560 over 60 templates: 40 used 43 times, 20 used 42 times
    assert sorted(Counter(counts.values()).items()) == [(42, 20), (43, 40)]


def test_distractor_templates_reuse_structural_shapes(items):
    for item in (i for i in items if i.kind == "distractor"):
        if item.load == "2prop":
            assert item.template_id.startswith("dis2:med:")
        else:
            assert item.template_id.startswith("dis3:high:")


def test_loads_share_base_pair(items):
    by_id = {i.id: i for i in items}
    checked = 0
    for item in by_id.values():
        if item.kind != "target" or item.load != "low":
            continue
        for load in ("medium", "high"):
            other = by_id[item.id[: -len("low")] + load]
            assert other.hypothesis == item.hypothesis
            assert other.question == item.question
            assert other.label == item.label
            assert other.correct_answer == item.correct_answer
            # the target clause is embedded verbatim modulo capitalization
            assert item.premise[1:-1] in other.premise
        checked += 1
    assert checked == 2560


def test_build_is_deterministic(lex, bank, items):
    again = build_dataset(lex, bank, master_seed=SEED)
    assert again == items


def test_build_seed_changes_output(lex, bank, items):
    other = build_dataset(lex, bank, master_seed=SEED + 1)
    assert [i.id for i in other] == [i.id for i in items]
    assert other != items  # fillers and template slots move


# ------------------------------------------------------------ bank guards


def test_bank_shortfall_is_an_error(lex, bank):
    short = [c for c in bank if c.text != bank[0].text]
    with pytest.raises(ListingError, match="exactly 80 auto-accepted premises") as err:
        build_dataset(lex, short)
    assert f"{bank[0].construction}: 79" in str(err.value)


def test_needs_review_entries_do_not_count(lex, bank):
    demoted = [replace(c, review_status="needs_review") if i == 0 else c
               for i, c in enumerate(bank)]
    with pytest.raises(ListingError, match="exactly 80 auto-accepted premises"):
        build_dataset(lex, demoted)


def test_non_canonical_bank_premise_rejected(lex, bank):
    # same words, wrong surface form: leading lowercase
    mangled = [replace(c, text=c.text[0].lower() + c.text[1:]) if i == 0 else c
               for i, c in enumerate(bank)]
    with pytest.raises(ListingError, match="not in canonical form"):
        build_dataset(lex, mangled)


def test_invalid_bank_premise_rejected(lex, bank):
    mangled = [replace(c, text="He kicked the ball.") if i == 0 else c
               for i, c in enumerate(bank)]
    with pytest.raises(ListingError, match="failed validation"):
        build_dataset(lex, mangled)


def test_odd_distractor_totals_rejected(lex, bank):
    with pytest.raises(ListingError, match="two_prop_distractors must be even"):
        build_dataset(lex, bank, BuildConfig(two_prop_distractors=2561))


# ---------------------------------------------------------- qualification


def test_qualification_shape(lex, bank):
    qual = build_qualification(lex, bank, master_seed=SEED)
    assert [q["id"] for q in qual] == [f"q-{i:02d}" for i in range(20)]
    assert [q["correct_answer"] for q in qual] == ["yes", "no"] * 10
    for q in qual:
        assert set(q) == {"id", "premise", "question", "correct_answer"}
        assert q["question"].startswith(("Did ", "Was "))
        assert q["premise"].endswith(".")


def test_qualification_ids_outside_dataset(lex, bank, items):
    qual = build_qualification(lex, bank, master_seed=SEED)
    dataset_ids = {i.id for i in items}
    assert not ({q["id"] for q in qual} & dataset_ids)


def test_qualification_deterministic(lex, bank):
    a = build_qualification(lex, bank, master_seed=SEED)
    b = build_qualification(lex, bank, master_seed=SEED)
    assert a == b


# ------------------------------------------------------------- partitions


def test_partition_covers_every_item_once(items, lists):
    assert len(lists) == 160
    assert [l.list_id for l in lists] == [f"list_{i:03d}" for i in range(160)]
    seen = Counter()
    for lst in lists:
        assert len(lst.item_ids) == 96
        seen.update(lst.item_ids)
    assert len(seen) == 15360
    assert set(seen.values()) == {1}
    assert set(seen) == {i.id for i in items}


def test_partition_balance_per_list(items, lists):
    by_id = {i.id: i for i in items}
    for lst in lists:
        rows = [by_id[i] for i in lst.item_ids]
        targets = [r for r in rows if r.kind == "target"]
        assert len(targets) == 48
        assert sum(1 for r in rows if r.correct_answer == "yes") == 48
        assert Counter(t.load for t in targets) == {"low": 16, "medium": 16, "high": 16}
        # one target per (construction, load, answer) cell
        cells = Counter((t.construction, t.load, t.correct_answer) for t in targets)
        assert len(cells) == 48 and set(cells.values()) == {1}
        # distractors: 8 + 8 two-prop, 16 + 16 three-prop
        dis = Counter((r.load, r.correct_answer) for r in rows if r.kind == "distractor")
        assert dis == {
            ("2prop", "yes"): 8,
            ("2prop", "no"): 8,
            ("3prop", "yes"): 16,
            ("3prop", "no"): 16,
        }


def test_partition_is_deterministic(items, lists):
    assert partition_lists(items, master_seed=SEED) == lists


def test_partition_wrong_total(items):
    with pytest.raises(ListingError, match="expected 15360 items"):
        partition_lists(items[:-1])


def test_partition_uneven_stratum(items):
    # duplicate one target in place of another: one stratum gains, one loses
    a = next(i for i, it in enumerate(items) if it.correct_answer == "yes" and it.kind == "target")
    b = next(i for i, it in enumerate(items) if it.correct_answer == "no" and it.kind == "target")
    broken = list(items)
    broken[b] = broken[a]
    with pytest.raises(ListingError, match="not divisible across 160 lists"):
        partition_lists(broken)


def test_assign_list_ids(items, lists):
    assigned = assign_list_ids(items, lists)
    where = {i: l.list_id for l in lists for i in l.item_ids}
    assert all(item.list_id == where[item.id] for item in assigned)
    assert [i.id for i in assigned] == [i.id for i in items]


def test_assign_list_ids_missing_item(items, lists):
    with pytest.raises(ListingError, match="missing from lists"):
        assign_list_ids(items, lists[:-1])


# ------------------------------------------------------------ round trip


def test_write_read_roundtrip(tmp_path, items, lists):
    assigned = assign_list_ids(items, lists)
    items_path, lists_path = write_dataset(assigned, lists, tmp_path)
    assert items_path.name == "gelp.items.jsonl"
    assert lists_path.name == "gelp.lists.jsonl"
    back_items, back_lists = read_dataset(tmp_path)
    assert back_items == assigned
    assert back_lists == lists


def test_write_dataset_needs_directory(tmp_path, items, lists):
    with pytest.raises(ListingError, match="does not exist"):
        write_dataset(items, lists, tmp_path / "nope")


def test_read_dataset_unknown_reference(tmp_path, items, lists):
    assigned = assign_list_ids(items, lists)
    write_dataset(assigned, lists, tmp_path)
    rows = [{"list_id": l.list_id, "item_ids": list(l.item_ids)} for l in lists]
    rows[0]["item_ids"] = ["t-missing-v00.0-plaus-ident-low"] + rows[0]["item_ids"][1:]
    with open(tmp_path / "gelp.lists.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    with pytest.raises(ListingError, match="unknown item"):
        read_dataset(tmp_path)


def test_read_dataset_duplicate_across_lists(tmp_path, items, lists):
    assigned = assign_list_ids(items, lists)
    write_dataset(assigned, lists, tmp_path)
    rows = [{"list_id": l.list_id, "item_ids": list(l.item_ids)} for l in lists]
    rows[1]["item_ids"] = [rows[0]["item_ids"][0]] + rows[1]["item_ids"][1:]
    with open(tmp_path / "gelp.lists.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    with pytest.raises(ListingError, match="more than one list"):
        read_dataset(tmp_path)
