"""Majority votes, accuracy, matching, breakdowns, and report files."""
import itertools
import json
import math
import random

import pytest

from gelp.items import DatasetItem
from gelp.scoring import (
    DEFAULT_DIMENSIONS,
    Score,
    ScoringError,
    accuracy,
    binomial_se,
    build_report,
    collect_majorities,
    group_items,
    majority_answer,
    matching_score,
    model_accuracy,
    model_grid,
    proportion,
    read_predictions,
    read_responses,
    write_model_grid_tsv,
    write_plotdata,
    write_report_tsv,
)

# published-scale anchors: accuracies near 0.743 and 0.591 on 7,680 items
# carry standard errors that round to half a point. frozen independently:
# sqrt(p*(1-p)/n) computed by hand for both.
SE_HIGH = 0.0049863224382638285
SE_LOW = 0.00561015401972174


def make_target(i, load="low", construction="transitive", answer="yes",
                plausibility="plausible"):
    label = "entailment" if answer == "yes" else "non_entailment"
    return DatasetItem(
        id=f"t-{construction}-v{i:02d}.0-plaus-ident-{load}",
        kind="target",
        construction=construction,
        plausibility=plausibility,
        load=load,
        connectives=(),
        target_position=1,
        premise=f"The boy kicked the ball {i}.",
        hypothesis=f"The boy kicked the ball {i}.",
        label=label,
        question=f"Did the boy kick the ball {i}?",
        correct_answer=answer,
        template_id="low",
        list_id=None,
    )


def make_distractor(i, answer="yes"):
    return DatasetItem(
        id=f"d-2prop-{answer}-{i:04d}",
        kind="distractor",
        construction=None,
        plausibility=None,
        load="2prop",
        connectives=("and",),
        target_position=1,
        premise=f"The singer met the judge {i} and the boy kicked the ball.",
        hypothesis=f"The singer met the judge {i}.",
        label="entailment" if answer == "yes" else "non_entailment",
        question=f"Did the singer meet the judge {i}?",
        correct_answer=answer,
        template_id="dis2:med:and:target_first",
        list_id=None,
    )


# --------------------------------------------------------- standard error


def test_se_anchor_high():
    got = binomial_se(0.743, 7680)
    assert got == SE_HIGH
    assert abs(got - 0.0050) < 1e-4  # reported as (0.5) percentage points


def test_se_anchor_low():
    got = binomial_se(0.591, 7680)
    assert got == SE_LOW
    assert abs(got - 0.0056) < 1e-4  # reported as (0.6)


def test_se_rejects_empty():
    with pytest.raises(ScoringError):
        binomial_se(0.5, 0)


def test_proportion():
    s = proportion(3, 4)
    assert s == Score(0.75, math.sqrt(0.75 * 0.25 / 4), 4)


# --------------------------------------------------------------- majority


def test_majority_matches_exhaustive_enumeration():
    # all eight three-response patterns, judged by counting
    for pattern in itertools.product(("yes", "no"), repeat=3):
        want = "yes" if pattern.count("yes") >= 2 else "no"
        assert majority_answer(list(pattern)) == want


def test_majority_single_and_five():
    assert majority_answer(["no"]) == "no"
    assert majority_answer(["yes", "no", "no", "yes", "yes"]) == "yes"


def test_majority_rejects_even_and_empty_and_junk():
    with pytest.raises(ScoringError, match="even response count 2"):
        majority_answer(["yes", "no"])
    with pytest.raises(ScoringError, match="no responses"):
        majority_answer([])
    with pytest.raises(ScoringError, match="unexpected answer value 'maybe'"):
        majority_answer(["yes", "maybe", "no"])


def test_collect_majorities_skips_partial_items():
    warnings = []
    got = collect_majorities(
        {"a": ["yes", "yes", "no"], "b": ["yes", "no"], "c": ["no", "no", "no"]},
        warn=warnings.append,
    )
    assert got == {"a": "yes", "c": "no"}
    assert any("item b has 2 responses" in w for w in warnings)
    assert any("1 items excluded" in w for w in warnings)


def test_collect_majorities_clean_run_is_silent():
    warnings = []
    got = collect_majorities({"a": ["yes", "yes", "no"]}, warn=warnings.append)
    assert got == {"a": "yes"}
    assert warnings == []


# ------------------------------------------------------- twelve item check


@pytest.fixture
def twelve():
    items = {}
    majorities = {}
    predictions = {}
    # 7 of 12 predictions agree with the majority
    for i in range(12):
        item = make_target(i, answer="yes" if i % 2 == 0 else "no")
        items[item.id] = item
        majorities[item.id] = item.correct_answer
        agree = i < 7
        human_yes = majorities[item.id] == "yes"
        predictions[item.id] = (
            "entailment" if human_yes == agree else "non_entailment"
        )
    return items, majorities, predictions


def test_matching_twelve_items_is_seven_twelfths(twelve):
    items, majorities, predictions = twelve
    score = matching_score(majorities, predictions)
    assert score.value == 7 / 12
    assert score.n == 12


def test_flipping_one_prediction_moves_score_one_twelfth(twelve):
    items, majorities, predictions = twelve
    before = matching_score(majorities, predictions)
    flipped = dict(predictions)
    key = sorted(flipped)[0]
    flipped[key] = (
        "non_entailment" if flipped[key] == "entailment" else "entailment"
    )
    after = matching_score(majorities, flipped)
    assert after.value == 6 / 12
    assert round(before.value * 12) - round(after.value * 12) == 1


# ---------------------------------------------------------------- metrics


def test_accuracy_counts_majority_hits():
    items = {f"t{i}": make_target(i) for i in range(4)}
    items = {item.id: item for item in items.values()}
    ids = sorted(items)
    majorities = {ids[0]: "yes", ids[1]: "yes", ids[2]: "no", ids[3]: "no"}
    got = accuracy(majorities, items)
    assert got.value == 0.5 and got.n == 4


def test_accuracy_unknown_item():
    with pytest.raises(ScoringError, match="unknown items, first: ghost"):
        accuracy({"ghost": "yes"}, {})


def test_model_accuracy_maps_labels():
    item = make_target(0, answer="no")
    got = model_accuracy([item.id], {item.id: "non_entailment"}, {item.id: item})
    assert got.value == 1.0


def test_missing_predictions_error_lists_ids():
    majorities = {f"item-{i:02d}": "yes" for i in range(8)}
    with pytest.raises(ScoringError, match="8 items lack predictions") as err:
        matching_score(majorities, {})
    assert "item-00, item-01, item-02, item-03, item-04" in str(err.value)


def test_matching_rejects_unknown_label():
    with pytest.raises(ScoringError, match="unknown label 'maybe'"):
        matching_score({"a": "yes"}, {"a": "maybe"})


def test_empty_inputs_error():
    with pytest.raises(ScoringError, match="empty item set"):
        matching_score({}, {})
    with pytest.raises(ScoringError, match="empty item set"):
        model_accuracy([], {}, {})


# ------------------------------------------------------------- breakdowns


def test_group_items_orders_and_filters():
    items = {}
    ids = []
    for i, load in enumerate(["high", "low", "medium", "low"]):
        item = make_target(i, load=load)
        items[item.id] = item
        ids.append(item.id)
    dis = DatasetItem(
        id="d-2prop-yes-0000", kind="distractor", construction=None,
        plausibility=None, load="2prop", connectives=("and",), target_position=1,
        premise="The singer met the judge and the boy kicked the ball.",
        hypothesis="The singer met the judge.", label="entailment",
        question="Did the singer meet the judge?", correct_answer="yes",
        template_id="dis2:med:and:target_first", list_id=None,
    )
    items[dis.id] = dis
    ids.append(dis.id)
    groups = group_items(ids, items, "load")
    assert list(groups) == ["low", "medium", "high"]  # fixed report order
    assert len(groups["low"]) == 2
    assert all(i != dis.id for g in groups.values() for i in g)


def test_group_items_crossing_order():
    items = {}
    ids = []
    for i, (load, ans) in enumerate(
        itertools.product(("low", "medium", "high"), ("yes", "no"))
    ):
        item = make_target(i, load=load, answer=ans)
        items[item.id] = item
        ids.append(item.id)
    groups = group_items(ids, items, "load*answer")
    assert list(groups) == [
        "low*yes", "low*no", "medium*yes", "medium*no", "high*yes", "high*no",
    ]


def test_group_items_unknown_dimension():
    with pytest.raises(ScoringError, match="unknown breakdown dimension 'verb'"):
        group_items([], {}, "verb")


def test_group_items_unknown_id():
    with pytest.raises(ScoringError, match="unknown item 'nope'"):
        group_items(["nope"], {}, "load")


def test_report_engineered_per_load_accuracies():
    # 10 items per load with 9, 8, and 7 correct majorities
    items = {}
    majorities = {}
    hits = {"low": 9, "medium": 8, "high": 7}
    i = 0
    for load in ("low", "medium", "high"):
        for j in range(10):
            item = make_target(i, load=load)
            items[item.id] = item
            majorities[item.id] = "yes" if j < hits[load] else "no"
            i += 1
    rows = build_report(majorities, items, dimensions=("load",))
    assert rows[0][:3] == ("human_accuracy", "overall", "all")
    assert rows[0][3].value == pytest.approx(24 / 30)
    by_group = {(r[1], r[2]): r[3] for r in rows}
    assert by_group[("load", "low")].value == pytest.approx(0.9)
    assert by_group[("load", "medium")].value == pytest.approx(0.8)
    assert by_group[("load", "high")].value == pytest.approx(0.7)
    assert all(by_group[("load", g)].n == 10 for g in ("low", "medium", "high"))


def test_single_group_equals_overall():
    items = {}
    majorities = {}
    for i in range(10):
        item = make_target(i)
        items[item.id] = item
        majorities[item.id] = "yes" if i < 6 else "no"
    rows = build_report(majorities, items, dimensions=("construction",))
    overall = rows[0][3]
    only = [r for r in rows if r[1] == "construction"]
    assert len(only) == 1 and only[0][2] == "transitive"
    assert only[0][3] == overall


def test_group_scores_are_n_weighted_parts_of_overall():
    rng = random.Random(20240819)
    constructions = list(
        {"transitive", "passive", "doc", "dative", "benefactive_doc",
         "benefactive_for", "experiencer_subject", "experiencer_object"}
    )
    for _ in range(50):
        items = {}
        majorities = {}
        for i in range(rng.randrange(20, 80)):
            item = make_target(
                i,
                load=rng.choice(("low", "medium", "high")),
                construction=rng.choice(constructions),
                answer=rng.choice(("yes", "no")),
            )
            items[item.id] = item
            majorities[item.id] = rng.choice(("yes", "no"))
        rows = build_report(majorities, items)
        overall = rows[0][3]
        for dimension in DEFAULT_DIMENSIONS:
            parts = [r[3] for r in rows if r[0] == "human_accuracy" and r[1] == dimension]
            assert sum(p.n for p in parts) == overall.n
            total = sum(p.value * p.n for p in parts)
            assert total == pytest.approx(overall.value * overall.n)


def test_report_includes_model_metrics_when_predicted(twelve):
    items, majorities, predictions = twelve
    rows = build_report(majorities, items, predictions, dimensions=("answer",))
    metrics = [r[0] for r in rows]
    assert metrics.count("human_accuracy") == metrics.count("model_accuracy")
    assert ("matching", "overall", "all") in [r[:3] for r in rows]
    match_overall = next(r[3] for r in rows if r[:3] == ("matching", "overall", "all"))
    assert match_overall.value == 7 / 12


def test_model_grid_rows(twelve):
    items, majorities, predictions = twelve
    inverted = {
        k: ("entailment" if v == "non_entailment" else "non_entailment")
        for k, v in predictions.items()
    }
    rows = model_grid(majorities, items, {"L2-A2": predictions, "L12-A12": inverted})
    assert [r[0] for r in rows[:2]] == ["L2-A2", "L2-A2"]
    assert rows[0][:3] == ("L2-A2", "matching", "all")
    assert rows[0][3].value == 7 / 12
    inv_row = next(r for r in rows if r[0] == "L12-A12" and r[1] == "matching")
    assert inv_row[3].value == 5 / 12
    assert [r[2] for r in rows if r[0] == "L2-A2" and r[1] == "model_accuracy"] == [
        "all", "low",
    ]


def test_report_model_metrics_cover_targets_only(twelve):
    # prediction files carry one record per target; scored distractors must
    # not make the model metrics demand predictions they can never have
    items, majorities, predictions = twelve
    items = dict(items)
    majorities = dict(majorities)
    for i in range(4):
        dis = make_distractor(i, answer="yes" if i % 2 == 0 else "no")
        items[dis.id] = dis
        majorities[dis.id] = dis.correct_answer
    rows = build_report(majorities, items, predictions, dimensions=("answer",))
    by_key = {r[:3]: r[3] for r in rows}
    assert by_key[("human_accuracy", "overall", "all")].n == 16
    assert by_key[("model_accuracy", "overall", "all")].n == 12
    assert by_key[("matching", "overall", "all")].n == 12
    assert by_key[("matching", "overall", "all")].value == 7 / 12


def test_model_grid_skips_distractor_majorities(twelve):
    items, majorities, predictions = twelve
    items = dict(items)
    majorities = dict(majorities)
    dis = make_distractor(0)
    items[dis.id] = dis
    majorities[dis.id] = dis.correct_answer
    rows = model_grid(majorities, items, {"L2-A2": predictions})
    assert rows[0][:3] == ("L2-A2", "matching", "all")
    assert rows[0][3] == Score(7 / 12, binomial_se(7 / 12, 12), 12)


def test_model_metrics_need_target_majorities():
    dis = make_distractor(0)
    items = {dis.id: dis}
    majorities = {dis.id: "yes"}
    with pytest.raises(ScoringError, match="no target item has a complete"):
        build_report(majorities, items, predictions={})
    with pytest.raises(ScoringError, match="no target item has a complete"):
        model_grid(majorities, items, {"m": {}})


# ------------------------------------------------------------------ files


def test_read_responses_accepts_server_log(tmp_path):
    path = tmp_path / "log.jsonl"
    events = [
        {"type": "assign", "worker_id": "w1", "list_id": "list_000"},
        {"type": "response", "worker_id": "w1", "item_id": "a", "response": "yes",
         "rt_premise_ms": 900, "rt_question_ms": 700, "ts": 1.0},
        {"type": "response", "worker_id": "w2", "item_id": "a", "response": "no"},
        {"type": "qualification", "worker_id": "w3", "passed": True},
        {"worker_id": "w3", "item_id": "a", "response": "yes"},  # bare record
    ]
    path.write_text("\n".join(json.dumps(e) for e in events) + "\n", encoding="utf-8")
    assert read_responses(path) == {"a": ["yes", "no", "yes"]}


def test_read_responses_first_answer_wins(tmp_path):
    path = tmp_path / "log.jsonl"
    events = [
        {"worker_id": "w1", "item_id": "a", "response": "yes"},
        {"worker_id": "w1", "item_id": "a", "response": "no"},
    ]
    path.write_text("\n".join(json.dumps(e) for e in events) + "\n", encoding="utf-8")
    assert read_responses(path) == {"a": ["yes"]}


@pytest.mark.parametrize(
    "record,msg",
    [
        ('{"worker_id": "w", "item_id": "a"}', "missing field 'response'"),
        ('{"worker_id": "w", "item_id": "a", "response": "maybe"}', "bad response"),
        ("{oops", "not valid JSON"),
    ],
)
def test_read_responses_rejects_bad_lines(tmp_path, record, msg):
    path = tmp_path / "log.jsonl"
    path.write_text(record + "\n", encoding="utf-8")
    with pytest.raises(ScoringError, match=":1:") as err:
        read_responses(path)
    assert msg in str(err.value)


def test_read_predictions(tmp_path):
    path = tmp_path / "preds.jsonl"
    path.write_text(
        '{"item_id": "a", "predicted": "entailment"}\n'
        "\n"
        '{"item_id": "b", "predicted": "non_entailment"}\n',
        encoding="utf-8",
    )
    assert read_predictions(path) == {"a": "entailment", "b": "non_entailment"}


@pytest.mark.parametrize(
    "lines,msg",
    [
        ('{"item_id": "a"}', "need fields"),
        ('{"item_id": "a", "predicted": "neutral"}', "unknown label 'neutral'"),
        ('{"item_id": "a", "predicted": "entailment"}\n'
         '{"item_id": "a", "predicted": "entailment"}', "duplicate prediction"),
    ],
)
def test_read_predictions_rejects_bad_lines(tmp_path, lines, msg):
    path = tmp_path / "preds.jsonl"
    path.write_text(lines + "\n", encoding="utf-8")
    with pytest.raises(ScoringError, match=msg):
        read_predictions(path)


def test_write_report_tsv_format(tmp_path):
    rows = [
        ("human_accuracy", "overall", "all", Score(0.8, 0.02, 400)),
        ("human_accuracy", "load", "low", Score(0.9, 0.03, 100)),
    ]
    path = write_report_tsv(rows, tmp_path / "report.tsv")
    assert path.read_text(encoding="utf-8") == (
        "metric\tdimension\tgroup\tvalue\tse\tn\n"
        "human_accuracy\toverall\tall\t0.800000\t0.020000\t400\n"
        "human_accuracy\tload\tlow\t0.900000\t0.030000\t100\n"
    )


def test_write_model_grid_tsv_format(tmp_path):
    rows = [("L2-A2", "matching", "all", Score(0.591, SE_LOW, 7680))]
    path = write_model_grid_tsv(rows, tmp_path / "grid.tsv")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("model\tmetric\tgroup\tvalue\tse\tn\n")
    assert "L2-A2\tmatching\tall\t0.591000\t0.005610\t7680\n" in text


def test_write_plotdata_nesting(tmp_path):
    rows = [
        ("human_accuracy", "overall", "all", Score(0.8, 0.02, 400)),
        ("human_accuracy", "load", "low", Score(0.9, 0.03, 100)),
    ]
    path = write_plotdata(rows, tmp_path / "plotdata.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["human_accuracy"]["overall"]["all"] == {
        "value": 0.8, "se": 0.02, "n": 400,
    }
    assert data["human_accuracy"]["load"]["low"]["n"] == 100
