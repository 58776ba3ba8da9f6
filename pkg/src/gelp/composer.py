"""Memory-load composition: joining target premises with filler propositions.

A low-load item is a bare premise.  Medium load joins the target with one
filler proposition through a connective (5 connectives x 2 orders = 10
premise shapes; each shape pairs with both hypothesis types of the base
item at build time).  High load chains three propositions as
"P1 c1 P2, c2 P3" with two distinct connectives and the target in any of
the three positions: 20 ordered connective pairs x 3 positions = 60
structural templates.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .constructions import NLIPair
from .items import DatasetItem
from .lexicon import Lexicon, NounEntry, VerbEntry

CONNECTIVES = ("and", "after", "when", "but", "because")
ORDERS = ("target_first", "filler_first")
LOADS = ("low", "medium", "high")


class ComposerError(Exception):
    pass


@dataclass(frozen=True)
class FillerProposition:
    subject: NounEntry
    verb: VerbEntry
    object: NounEntry

    def __post_init__(self):
        if self.subject.surface == self.object.surface:
            raise ComposerError("filler subject and object must differ")

    def sentence(self) -> str:
        return f"The {self.subject.surface} {self.verb.past} the {self.object.surface}."

    def question(self, swapped: bool = False) -> str:
        s, o = (self.object, self.subject) if swapped else (self.subject, self.object)
        return f"Did the {s.surface} {self.verb.lemma} the {o.surface}?"

    def statement(self, swapped: bool = False) -> str:
        s, o = (self.object, self.subject) if swapped else (self.subject, self.object)
        return f"The {s.surface} {self.verb.past} the {o.surface}."


@dataclass(frozen=True)
class LowTemplate:
    template_id: str = "low"


@dataclass(frozen=True)
class MediumTemplate:
    connective: str
    order: str

    @property
    def template_id(self) -> str:
        return f"med:{self.connective}:{self.order}"


@dataclass(frozen=True)
class HighTemplate:
    first_connective: str
    second_connective: str
    target_position: int

    @property
    def template_id(self) -> str:
        return f"high:{self.first_connective}+{self.second_connective}:p{self.target_position}"


MEDIUM_TEMPLATES = tuple(
    MediumTemplate(c, order) for c in CONNECTIVES for order in ORDERS
)
HIGH_TEMPLATES = tuple(
    HighTemplate(c1, c2, pos)
    for c1 in CONNECTIVES
    for c2 in CONNECTIVES
    if c1 != c2
    for pos in (1, 2, 3)
)


def enumerate_templates(load: str):
    """All structural templates for a load level (1, 10, or 60)."""
    if load == "low":
        return (LowTemplate(),)
    if load == "medium":
        return MEDIUM_TEMPLATES
    if load == "high":
        return HIGH_TEMPLATES
    raise ComposerError(f"unknown load {load!r}")


@dataclass(frozen=True)
class ComposedItem:
    base: NLIPair
    load: str
    propositions: tuple[str, ...]
    connectives: tuple[str, ...]
    target_position: int
    premise_text: str
    template_id: str

    # hypothesis, question, label, and answer always come from the base pair
    @property
    def hypothesis(self) -> str:
        return self.base.hypothesis

    @property
    def question(self) -> str:
        return self.base.question

    @property
    def label(self) -> str:
        return self.base.label

    @property
    def correct_answer(self) -> str:
        return self.base.correct_answer


def _decap(sentence: str) -> str:
    return sentence[0].lower() + sentence[1:] if sentence else sentence


def _strip_period(sentence: str) -> str:
    if not sentence.endswith("."):
        raise ComposerError(f"proposition must end with a period: {sentence!r}")
    return sentence[:-1]


def join_two(first: str, second: str, connective: str) -> str:
    return f"{_strip_period(first)} {connective} {_decap(_strip_period(second))}."


def join_three(first: str, second: str, third: str, c1: str, c2: str) -> str:
    # the comma goes before the second connective only
    return (
        f"{_strip_period(first)} {c1} {_decap(_strip_period(second))}, "
        f"{c2} {_decap(_strip_period(third))}."
    )


def _check_connective(c: str) -> None:
    if c not in CONNECTIVES:
        raise ComposerError(f"unknown connective {c!r}")


def compose_low(base: NLIPair) -> ComposedItem:
    return ComposedItem(
        base=base,
        load="low",
        propositions=(base.premise,),
        connectives=(),
        target_position=1,
        premise_text=base.premise,
        template_id="low",
    )


def compose_medium(base: NLIPair, connective: str, order: str, filler: FillerProposition) -> ComposedItem:
    _check_connective(connective)
    if order not in ORDERS:
        raise ComposerError(f"unknown order {order!r}")
    filler_sentence = filler.sentence()
    if order == "target_first":
        props = (base.premise, filler_sentence)
        target_position = 1
    else:
        props = (filler_sentence, base.premise)
        target_position = 2
    return ComposedItem(
        base=base,
        load="medium",
        propositions=props,
        connectives=(connective,),
        target_position=target_position,
        premise_text=join_two(props[0], props[1], connective),
        template_id=MediumTemplate(connective, order).template_id,
    )


def compose_high(
    base: NLIPair,
    first_connective: str,
    second_connective: str,
    filler_a: FillerProposition,
    filler_b: FillerProposition,
    target_position: int,
) -> ComposedItem:
    _check_connective(first_connective)
    _check_connective(second_connective)
    if first_connective == second_connective:
        raise ComposerError(f"high-load connectives must differ, got {first_connective!r} twice")
    if target_position not in (1, 2, 3):
        raise ComposerError(f"target_position must be 1..3, got {target_position!r}")
    fillers = [filler_a.sentence(), filler_b.sentence()]
    props: list[str] = []
    for pos in (1, 2, 3):
        props.append(base.premise if pos == target_position else fillers.pop(0))
    return ComposedItem(
        base=base,
        load="high",
        propositions=tuple(props),
        connectives=(first_connective, second_connective),
        target_position=target_position,
        premise_text=join_three(props[0], props[1], props[2], first_connective, second_connective),
        template_id=HighTemplate(first_connective, second_connective, target_position).template_id,
    )


def generate_filler(lex: Lexicon, rng: random.Random) -> FillerProposition:
    """Uniform draw of subject/verb/object from the filler inventory."""
    nouns = lex.filler_nouns
    verbs = lex.filler_verbs
    if len(nouns) < 2:
        raise ComposerError("need at least two filler nouns")
    if not verbs:
        raise ComposerError("need at least one filler verb")
    subject = rng.choice(nouns)
    others = [n for n in nouns if n.surface != subject.surface]
    return FillerProposition(subject, rng.choice(verbs), rng.choice(others))


def generate_distinct_fillers(lex: Lexicon, rng: random.Random) -> tuple[FillerProposition, FillerProposition]:
    """Two fillers with pairwise-distinct nouns and distinct verbs."""
    first = generate_filler(lex, rng)
    for _ in range(1000):
        second = generate_filler(lex, rng)
        nouns = {first.subject.surface, first.object.surface}
        if (
            second.subject.surface not in nouns
            and second.object.surface not in nouns
            and second.verb.lemma != first.verb.lemma
        ):
            return first, second
    raise ComposerError("filler inventory too small to draw two disjoint propositions")


def generate_distractor(
    lex: Lexicon,
    rng: random.Random,
    n_props: int,
    want_answer: str,
    target: NLIPair,
    template: MediumTemplate | HighTemplate | None = None,
    item_id: str = "d-adhoc",
) -> DatasetItem:
    """A filler-question item whose premise embeds a target proposition.

    The premise is composed exactly like a medium (2 propositions) or high
    (3 propositions) target item, but the question asks about one of the
    filler propositions: as stated for a yes answer, with subject and object
    exchanged for a no answer.
    """
    if n_props not in (2, 3):
        raise ComposerError(f"n_props must be 2 or 3, got {n_props!r}")
    if want_answer not in ("yes", "no"):
        raise ComposerError(f"want_answer must be yes or no, got {want_answer!r}")
    swapped = want_answer == "no"

    if n_props == 2:
        if template is None:
            template = rng.choice(MEDIUM_TEMPLATES)
        if not isinstance(template, MediumTemplate):
            raise ComposerError("two-proposition distractors take a MediumTemplate")
        filler = generate_filler(lex, rng)
        if template.order == "target_first":
            props = (target.premise, filler.sentence())
            target_position = 1
        else:
            props = (filler.sentence(), target.premise)
            target_position = 2
        premise = join_two(props[0], props[1], template.connective)
        connectives = (template.connective,)
        load = "2prop"
        asked = filler
    else:
        if template is None:
            template = rng.choice(HIGH_TEMPLATES)
        if not isinstance(template, HighTemplate):
            raise ComposerError("three-proposition distractors take a HighTemplate")
        filler_a, filler_b = generate_distinct_fillers(lex, rng)
        fillers = [filler_a.sentence(), filler_b.sentence()]
        props_list: list[str] = []
        for pos in (1, 2, 3):
            if pos == template.target_position:
                props_list.append(target.premise)
            else:
                props_list.append(fillers.pop(0))
        props = tuple(props_list)
        target_position = template.target_position
        premise = join_three(
            props[0], props[1], props[2], template.first_connective, template.second_connective
        )
        connectives = (template.first_connective, template.second_connective)
        load = "3prop"
        asked = rng.choice((filler_a, filler_b))

    label = "non_entailment" if swapped else "entailment"
    return DatasetItem(
        id=item_id,
        kind="distractor",
        construction=None,
        plausibility=None,
        load=load,
        connectives=connectives,
        target_position=target_position,
        premise=premise,
        hypothesis=asked.statement(swapped),
        label=label,
        question=asked.question(swapped),
        correct_answer=want_answer,
        template_id=f"dis{n_props}:{template.template_id}",
    )
