import pytest

from gelp_adapter.labels import RAW_LABELS, collapse_label, to_binary


def test_collapse_mapping_exact():
    assert collapse_label("entailment") == "entailment"
    assert collapse_label("neutral") == "non_entailment"
    assert collapse_label("contradiction") == "non_entailment"


def test_collapse_total_over_raw_labels():
    assert len(RAW_LABELS) == 3
    for raw in RAW_LABELS:
        assert collapse_label(raw) in ("entailment", "non_entailment")


@pytest.mark.parametrize("bad", ["", "ENTAILMENT", "maybe", "non-entailment"])
def test_collapse_rejects_unknown(bad):
    with pytest.raises(ValueError, match="unknown raw label"):
        collapse_label(bad)


def test_to_binary_passes_two_way_labels_through():
    assert to_binary("non_entailment") == "non_entailment"
    assert to_binary("entailment") == "entailment"
    assert to_binary("neutral") == "non_entailment"
