"""Dataset assembly and counterbalanced list partitioning.

Every build is a pure function of (lexicon, premise bank, config, master
seed).  Randomness for each item is derived from the master seed and the
item id, so two builds with the same inputs are byte-identical and the
order of construction does not matter.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, replace
from pathlib import Path

from .composer import (
    HIGH_TEMPLATES,
    MEDIUM_TEMPLATES,
    ComposedItem,
    compose_high,
    compose_low,
    compose_medium,
    generate_distinct_fillers,
    generate_filler,
    generate_distractor,
)
from .constructions import (
    CONSTRUCTIONS,
    CONSTRUCTION_CLASS,
    NLIPair,
    make_hypotheses,
    parse_premise,
    realize_premise,
    swap_arguments,
)
from .items import DatasetItem, ExperimentList, item_to_obj, read_items, read_lists, write_jsonl
from .lexicon import Lexicon
from .seeder import CandidatePremise

ITEMS_FILENAME = "gelp.items.jsonl"
LISTS_FILENAME = "gelp.lists.jsonl"
QUAL_FILENAME = "gelp.qual.jsonl"

N_LISTS = 160
LIST_SIZE = 96


class ListingError(Exception):
    pass


@dataclass(frozen=True)
class BuildConfig:
    premises_per_construction: int = 80
    label_mode: str = "logical"
    two_prop_distractors: int = 2560
    three_prop_distractors: int = 5120
    qualification_items: int = 20


def rng_for(master_seed: int, *path: str) -> random.Random:
    """Independent RNG for one derivation path under the master seed."""
    digest = hashlib.sha256(("/".join((str(master_seed),) + path)).encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


_PLAUS_TAG = {"plausible": "plaus", "implausible": "implaus"}
_HYP_TAGS = ("ident", "swap")


def _target_item(
    item_id: str,
    construction: str,
    plausibility: str,
    composed: ComposedItem,
    master_seed: int,
) -> DatasetItem:
    return DatasetItem(
        id=item_id,
        kind="target",
        construction=construction,
        plausibility=plausibility,
        load=composed.load,
        connectives=composed.connectives,
        target_position=composed.target_position,
        premise=composed.premise_text,
        hypothesis=composed.hypothesis,
        label=composed.label,
        question=composed.question,
        correct_answer=composed.correct_answer,
        template_id=composed.template_id,
        list_id=None,
        seed_provenance=(master_seed, item_id),
    )


def _accepted_by_construction(
    bank: list[CandidatePremise], required: int
) -> dict[str, list[CandidatePremise]]:
    accepted: dict[str, list[CandidatePremise]] = {c: [] for c in CONSTRUCTIONS}
    for cand in bank:
        if cand.review_status == "auto_accepted" and cand.construction in accepted:
            accepted[cand.construction].append(cand)
    short = {c: len(v) for c, v in accepted.items() if len(v) != required}
    if short:
        detail = ", ".join(f"{c}: {n}" for c, n in sorted(short.items()))
        raise ListingError(
            f"premise bank must hold exactly {required} auto-accepted premises "
            f"per construction; got {detail}"
        )
    return accepted


def build_dataset(
    lex: Lexicon,
    bank: list[CandidatePremise],
    config: BuildConfig = BuildConfig(),
    master_seed: int = 0,
) -> list[DatasetItem]:
    """Assemble the full item set: targets at three loads plus distractors."""
    accepted = _accepted_by_construction(bank, config.premises_per_construction)
    for total, name in (
        (config.two_prop_distractors, "two_prop_distractors"),
        (config.three_prop_distractors, "three_prop_distractors"),
    ):
        if total % 2:
            raise ListingError(f"{name} must be even to balance yes/no, got {total}")

    # 1. low load: every bank premise yields a plausible and a swapped
    # implausible frame, each carrying an identical and a swapped hypothesis
    low: list[DatasetItem] = []
    bases: list[tuple[DatasetItem, NLIPair]] = []
    for construction in CONSTRUCTIONS:
        class_lemmas = [v.lemma for v in lex.verbs_in_class(CONSTRUCTION_CLASS[construction])]
        occurrence: dict[str, int] = {}
        for cand in accepted[construction]:
            parsed = parse_premise(cand.text, construction, lex)
            if not parsed.clean:
                problems = "; ".join(parsed.hard_violations + parsed.uncertainties)
                raise ListingError(
                    f"bank premise failed validation ({construction}): {cand.text!r}: {problems}"
                )
            frame = parsed.frame
            assert frame is not None
            if realize_premise(frame) != cand.text:
                raise ListingError(
                    f"bank premise is not in canonical form ({construction}): {cand.text!r}"
                )
            verb_index = class_lemmas.index(frame.verb.lemma)
            k = occurrence.get(frame.verb.lemma, 0)
            occurrence[frame.verb.lemma] = k + 1
            for variant in (frame, swap_arguments(frame)):
                pairs = make_hypotheses(variant, config.label_mode)
                for hyp_tag, pair in zip(_HYP_TAGS, pairs):
                    item_id = (
                        f"t-{construction}-v{verb_index:02d}.{k}"
                        f"-{_PLAUS_TAG[variant.plausibility]}-{hyp_tag}-low"
                    )
                    item = _target_item(
                        item_id, construction, variant.plausibility, compose_low(pair), master_seed
                    )
                    low.append(item)
                    bases.append((item, pair))

    # 2. medium and high: one composed item per base pair, structural
    # templates assigned round-robin over a seed-shuffled base order
    def template_slots(tag: str) -> list[int]:
        order = list(range(len(bases)))
        rng_for(master_seed, tag, "order").shuffle(order)
        slots = [0] * len(bases)
        for slot, base_index in enumerate(order):
            slots[base_index] = slot
        return slots

    medium: list[DatasetItem] = []
    for (low_item, pair), slot in zip(bases, template_slots("medium")):
        template = MEDIUM_TEMPLATES[slot % len(MEDIUM_TEMPLATES)]
        item_id = low_item.id[: -len("low")] + "medium"
        filler = generate_filler(lex, rng_for(master_seed, "medium", item_id))
        composed = compose_medium(pair, template.connective, template.order, filler)
        medium.append(
            _target_item(item_id, low_item.construction, low_item.plausibility, composed, master_seed)
        )

    high: list[DatasetItem] = []
    for (low_item, pair), slot in zip(bases, template_slots("high")):
        template = HIGH_TEMPLATES[slot % len(HIGH_TEMPLATES)]
        item_id = low_item.id[: -len("low")] + "high"
        filler_a, filler_b = generate_distinct_fillers(
            lex, rng_for(master_seed, "high", item_id)
        )
        composed = compose_high(
            pair,
            template.first_connective,
            template.second_connective,
            filler_a,
            filler_b,
            template.target_position,
        )
        high.append(
            _target_item(item_id, low_item.construction, low_item.plausibility, composed, master_seed)
        )

    # 3. distractors: filler questions over premises that embed a target
    # proposition, half yes / half no within each proposition count
    target_cycle = [pair for _, pair in bases]
    rng_for(master_seed, "distractor", "targets").shuffle(target_cycle)
    distractors: list[DatasetItem] = []
    consumed = 0
    for n_props, total, templates in (
        (2, config.two_prop_distractors, MEDIUM_TEMPLATES),
        (3, config.three_prop_distractors, HIGH_TEMPLATES),
    ):
        for i in range(total):
            want = "yes" if i < total // 2 else "no"
            serial = i if want == "yes" else i - total // 2
            item_id = f"d-{n_props}prop-{want}-{serial:04d}"
            target = target_cycle[(consumed + i) % len(target_cycle)]
            item = generate_distractor(
                lex,
                rng_for(master_seed, "distractor", item_id),
                n_props,
                want,
                target,
                template=templates[i % len(templates)],
                item_id=item_id,
            )
            distractors.append(replace(item, seed_provenance=(master_seed, item_id)))
        consumed += total

    return low + medium + high + distractors


def build_qualification(
    lex: Lexicon,
    bank: list[CandidatePremise],
    config: BuildConfig = BuildConfig(),
    master_seed: int = 0,
) -> list[dict]:
    """Screening items: two-proposition filler questions, half yes half no.

    These resemble dataset items but live outside the 160 lists.
    """
    accepted = _accepted_by_construction(bank, config.premises_per_construction)
    pool: list[NLIPair] = []
    for construction in CONSTRUCTIONS:
        for cand in accepted[construction]:
            parsed = parse_premise(cand.text, construction, lex)
            if parsed.frame is not None:
                pool.append(make_hypotheses(parsed.frame)[0])
    rng_for(master_seed, "qual", "targets").shuffle(pool)
    out = []
    for i in range(config.qualification_items):
        want = "yes" if i % 2 == 0 else "no"
        item = generate_distractor(
            lex,
            rng_for(master_seed, "qual", str(i)),
            2,
            want,
            pool[i % len(pool)],
            template=MEDIUM_TEMPLATES[i % len(MEDIUM_TEMPLATES)],
            item_id=f"q-{i:02d}",
        )
        out.append(
            {
                "id": item.id,
                "premise": item.premise,
                "question": item.question,
                "correct_answer": item.correct_answer,
            }
        )
    return out


def partition_lists(
    items: list[DatasetItem],
    master_seed: int = 0,
    n_lists: int = N_LISTS,
    list_size: int = LIST_SIZE,
) -> list[ExperimentList]:
    """Deal items into disjoint lists, balanced within every stratum.

    Targets stratify by (construction, load, answer), distractors by
    (proposition count, answer); each stratum must divide evenly across the
    lists.  At full scale that puts exactly one target per (construction,
    load, answer) cell in every list, which yields the 48/48 target versus
    distractor and yes versus no splits and the 16/16/16 load split.
    """
    if len(items) != n_lists * list_size:
        raise ListingError(
            f"expected {n_lists * list_size} items for {n_lists} lists of {list_size}, "
            f"got {len(items)}"
        )
    strata: dict[tuple, list[DatasetItem]] = {}
    for item in items:
        if item.kind == "target":
            key = ("target", item.construction, item.load, item.correct_answer)
        else:
            key = ("distractor", item.load, item.correct_answer)
        strata.setdefault(key, []).append(item)

    buckets: list[list[str]] = [[] for _ in range(n_lists)]
    for key in sorted(strata):
        members = strata[key][:]
        if len(members) % n_lists:
            raise ListingError(
                f"stratum {key} has {len(members)} items, not divisible across {n_lists} lists"
            )
        rng_for(master_seed, "partition", *map(str, key)).shuffle(members)
        for j, item in enumerate(members):
            buckets[j % n_lists].append(item.id)

    lists = []
    for i, bucket in enumerate(buckets):
        list_id = f"list_{i:03d}"
        rng_for(master_seed, "listorder", list_id).shuffle(bucket)
        lists.append(ExperimentList(list_id, tuple(bucket)))

    _check_partition(items, lists, list_size)
    return lists


def _check_partition(items: list[DatasetItem], lists: list[ExperimentList], list_size: int) -> None:
    by_id = {item.id: item for item in items}
    seen: set[str] = set()
    for lst in lists:
        if len(lst.item_ids) != list_size:
            raise ListingError(f"{lst.list_id} has {len(lst.item_ids)} items")
        kinds = {"target": 0, "distractor": 0}
        answers = {"yes": 0, "no": 0}
        loads = {"low": 0, "medium": 0, "high": 0}
        for item_id in lst.item_ids:
            if item_id in seen:
                raise ListingError(f"item {item_id} appears in more than one list")
            seen.add(item_id)
            item = by_id[item_id]
            kinds[item.kind] += 1
            answers[item.correct_answer] += 1
            if item.kind == "target":
                loads[item.load] += 1
        half = list_size // 2
        if kinds["target"] != half or answers["yes"] != half:
            raise ListingError(
                f"{lst.list_id} is unbalanced: {kinds['target']} targets, {answers['yes']} yes"
            )
        per_load = half // 3
        if any(n != per_load for n in loads.values()):
            raise ListingError(f"{lst.list_id} load split is {loads}")
    if len(seen) != len(items):
        raise ListingError("lists do not cover the dataset")


def assign_list_ids(items: list[DatasetItem], lists: list[ExperimentList]) -> list[DatasetItem]:
    where: dict[str, str] = {}
    for lst in lists:
        for item_id in lst.item_ids:
            where[item_id] = lst.list_id
    missing = [item.id for item in items if item.id not in where]
    if missing:
        raise ListingError(f"{len(missing)} items missing from lists, first: {missing[0]}")
    return [replace(item, list_id=where[item.id]) for item in items]


def write_dataset(
    items: list[DatasetItem], lists: list[ExperimentList], out_dir: str | Path
) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise ListingError(f"output directory does not exist: {out_dir}")
    items_path = write_jsonl(out_dir / ITEMS_FILENAME, (item_to_obj(i) for i in items))
    lists_path = write_jsonl(
        out_dir / LISTS_FILENAME,
        ({"list_id": l.list_id, "item_ids": list(l.item_ids)} for l in lists),
    )
    return items_path, lists_path


def read_dataset(out_dir: str | Path) -> tuple[list[DatasetItem], list[ExperimentList]]:
    """Inverse of write_dataset; re-validates schema and list coverage."""
    out_dir = Path(out_dir)
    items = read_items(out_dir / ITEMS_FILENAME)
    lists = read_lists(out_dir / LISTS_FILENAME)
    ids = {item.id for item in items}
    seen: set[str] = set()
    for lst in lists:
        for item_id in lst.item_ids:
            if item_id not in ids:
                raise ListingError(f"{lst.list_id} references unknown item {item_id!r}")
            if item_id in seen:
                raise ListingError(f"item {item_id} appears in more than one list")
            seen.add(item_id)
    return items, lists
