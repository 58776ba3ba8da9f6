"""Argument-structure frames: realization, swapping, hypotheses, questions.

Eight constructions are supported.  Every frame names one animate and one
inanimate NP; swapping the two positional roles turns a plausible premise
into an implausible one and vice versa.  Three-place constructions carry an
additional subject NP that swapping never touches.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .lexicon import Lexicon, NounEntry, VerbEntry

CONSTRUCTIONS = (
    "transitive",
    "passive",
    "doc",
    "dative",
    "benefactive_doc",
    "benefactive_for",
    "experiencer_subject",
    "experiencer_object",
)

THREE_PLACE = frozenset({"doc", "dative", "benefactive_doc", "benefactive_for"})

CONSTRUCTION_CLASS = {
    "transitive": "transitive",
    "passive": "transitive",
    "doc": "ditransitive",
    "dative": "ditransitive",
    "benefactive_doc": "benefactive",
    "benefactive_for": "benefactive",
    "experiencer_subject": "experiencer_subject",
    "experiencer_object": "experiencer_object",
}

# Animacy of the first marked slot under the plausible reading.  The second
# slot takes the opposite value; implausible premises exchange the two.
#   transitive            the boy kicked the ball
#   passive               the ball was kicked by the boy
#   doc                   the boy gave the girl the apple
#   dative                the boy gave the apple to the girl
#   benefactive_doc       the cook made the man the bread
#   benefactive_for       the cook made the bread for the man
#   experiencer_subject   the girl liked the book
#   experiencer_object    the book pleased the girl
_FIRST_SLOT_ANIMACY = {
    "transitive": "animate",
    "passive": "inanimate",
    "doc": "animate",
    "dative": "inanimate",
    "benefactive_doc": "animate",
    "benefactive_for": "inanimate",
    "experiencer_subject": "animate",
    "experiencer_object": "inanimate",
}

# preposition between the two object slots of a three-place construction
_MID_PREP = {"doc": "", "dative": "to", "benefactive_doc": "", "benefactive_for": "for"}

PLAUSIBILITIES = ("plausible", "implausible")
LABELS = ("entailment", "non_entailment")
LABEL_MODES = ("logical", "table_faithful")

# Constructions whose published label assignment inverts the logical one:
# the premise-identical hypothesis is marked non-entailed.  table_faithful
# mode reproduces that assignment verbatim.
_INVERTED_IN_TABLE = frozenset({"experiencer_subject", "experiencer_object"})

PRONOUNS = frozenset(
    """i you he she it we they me him her us them his hers its their theirs
    mine yours ours myself yourself himself herself itself ourselves
    themselves someone somebody something anyone anybody anything everyone
    everybody everything nobody nothing none this that these those""".split()
)


class RealizationError(Exception):
    pass


@dataclass(frozen=True)
class PremiseFrame:
    construction: str
    verb: VerbEntry
    animate_np: NounEntry
    inanimate_np: NounEntry
    extra_np: NounEntry | None = None
    plausibility: str = "plausible"


@dataclass(frozen=True)
class NLIPair:
    premise: str
    hypothesis: str
    label: str
    question: str
    correct_answer: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"bad label {self.label!r}")
        if (self.label == "entailment") != (self.correct_answer == "yes"):
            raise ValueError(
                f"label {self.label!r} inconsistent with answer {self.correct_answer!r}"
            )
        if not self.question.endswith("?"):
            raise ValueError("question must end with '?'")


def validate_frame(frame: PremiseFrame) -> None:
    c = frame.construction
    if c not in CONSTRUCTIONS:
        raise RealizationError(f"unknown construction {c!r}")
    if frame.plausibility not in PLAUSIBILITIES:
        raise RealizationError(f"unknown plausibility {frame.plausibility!r}")
    expected = CONSTRUCTION_CLASS[c]
    if frame.verb.verb_class != expected:
        raise RealizationError(
            f"verb {frame.verb.lemma!r} is {frame.verb.verb_class}, "
            f"construction {c} needs {expected}"
        )
    if frame.animate_np.animacy != "animate" or frame.inanimate_np.animacy != "inanimate":
        raise RealizationError("frame NPs must be one animate and one inanimate entry")
    if (frame.extra_np is not None) != (c in THREE_PLACE):
        raise RealizationError(
            f"extra_np must be present exactly for three-place constructions ({c})"
        )


def _positional_nouns(frame: PremiseFrame) -> tuple[NounEntry, NounEntry]:
    if _FIRST_SLOT_ANIMACY[frame.construction] == "animate":
        first, second = frame.animate_np, frame.inanimate_np
    else:
        first, second = frame.inanimate_np, frame.animate_np
    if frame.plausibility == "implausible":
        first, second = second, first
    return first, second


def realize_premise(frame: PremiseFrame) -> str:
    """Surface sentence for a frame, capitalized, with a terminal period."""
    validate_frame(frame)
    a, b = _positional_nouns(frame)
    v = frame.verb
    c = frame.construction
    if c == "passive":
        return f"The {a.surface} was {v.participle} by the {b.surface}."
    if c in THREE_PLACE:
        assert frame.extra_np is not None
        mid = _MID_PREP[c]
        mid = f" {mid}" if mid else ""
        return f"The {frame.extra_np.surface} {v.past} the {a.surface}{mid} the {b.surface}."
    return f"The {a.surface} {v.past} the {b.surface}."


def swap_arguments(frame: PremiseFrame) -> PremiseFrame:
    """Exchange the two marked NP positions; flips plausibility.

    Positions are derived from (construction, plausibility), so flipping the
    plausibility tag is exactly the positional exchange.  Involution: applying
    twice returns the original frame.
    """
    flipped = "implausible" if frame.plausibility == "plausible" else "plausible"
    return replace(frame, plausibility=flipped)


def _question_from_frame(frame: PremiseFrame, lemma: str) -> str:
    a, b = _positional_nouns(frame)
    v = frame.verb
    c = frame.construction
    if c == "passive":
        return f"Was the {a.surface} {v.participle} by the {b.surface}?"
    if c in THREE_PLACE:
        assert frame.extra_np is not None
        mid = _MID_PREP[c]
        mid = f" {mid}" if mid else ""
        return f"Did the {frame.extra_np.surface} {lemma} the {a.surface}{mid} the {b.surface}?"
    return f"Did the {a.surface} {lemma} the {b.surface}?"


def to_polar_question(premise: str, frame: PremiseFrame, lex: Lexicon) -> str:
    """Polar question for a realized premise.

    Actives take do-support with the base verb form; passives invert the
    auxiliary.  The premise must be the realization of ``frame``.
    """
    validate_frame(frame)
    if realize_premise(frame) != premise:
        raise RealizationError(f"premise {premise!r} was not produced by this frame")
    lemma = lex.base_form(frame.verb.past)
    return _question_from_frame(frame, lemma)


def make_hypotheses(frame: PremiseFrame, mode: str = "logical") -> tuple[NLIPair, NLIPair]:
    """The two hypothesis pairs sharing this frame's premise.

    Returns (identical, swapped): the first hypothesis repeats the premise
    string, the second swaps the two marked NPs.  In ``logical`` mode the
    identical hypothesis is the entailed one; ``table_faithful`` mode inverts
    that assignment for the two experiencer constructions, reproducing the
    published label table as printed.
    """
    if mode not in LABEL_MODES:
        raise RealizationError(f"unknown label mode {mode!r}")
    validate_frame(frame)
    premise = realize_premise(frame)
    other = swap_arguments(frame)
    label_identical = "entailment"
    if mode == "table_faithful" and frame.construction in _INVERTED_IN_TABLE:
        label_identical = "non_entailment"
    label_swapped = "non_entailment" if label_identical == "entailment" else "entailment"

    def pair(hyp_frame: PremiseFrame, hypothesis: str, label: str) -> NLIPair:
        question = _question_from_frame(hyp_frame, hyp_frame.verb.lemma)
        answer = "yes" if label == "entailment" else "no"
        return NLIPair(premise, hypothesis, label, question, answer)

    return (
        pair(frame, premise, label_identical),
        pair(other, realize_premise(other), label_swapped),
    )


@dataclass(frozen=True)
class ParsedPremise:
    """Outcome of matching a sentence against a construction's plausible shape."""

    construction: str
    frame: PremiseFrame | None
    verb: VerbEntry | None
    hard_violations: tuple[str, ...]
    uncertainties: tuple[str, ...]

    @property
    def clean(self) -> bool:
        return self.frame is not None and not self.hard_violations and not self.uncertainties


def parse_premise(sentence: str, construction: str, lex: Lexicon) -> ParsedPremise:
    """Structural check of a candidate premise against the plausible pattern.

    Hard violations: pronouns, a token between a determiner and its noun
    (adjective heuristic), NP count mismatch, a verb outside the
    construction's class, wrong animacy for a known noun.  Unknown nouns are
    reported as uncertainties instead of guesses.
    """
    if construction not in CONSTRUCTIONS:
        raise RealizationError(f"unknown construction {construction!r}")
    hard: list[str] = []
    soft: list[str] = []

    text = sentence.strip()
    if text.endswith("."):
        text = text[:-1]
    else:
        hard.append("missing terminal period")
    tokens = text.split()
    if tokens:
        tokens[0] = tokens[0][0].lower() + tokens[0][1:]
    for t in tokens:
        if t.lower() in PRONOUNS:
            hard.append(f"pronoun '{t}'")
    bad = [t for t in tokens if not t.isalpha() or t != t.lower()]
    if bad:
        # structure is unreliable past this point
        hard.append(f"unexpected tokens: {', '.join(bad)}")
        return ParsedPremise(construction, None, None, tuple(hard), tuple(soft))

    expected_class = CONSTRUCTION_CLASS[construction]
    slots = _parse_slots(tokens, construction, lex, hard)
    if slots is None:
        return ParsedPremise(construction, None, None, tuple(hard), tuple(soft))
    verb_token, np_tokens = slots

    verb = None
    if construction == "passive":
        verb = next(
            (v for v in lex.verbs_in_class(expected_class) if v.participle == verb_token), None
        )
        if verb is None:
            if lex.is_participle(verb_token):
                hard.append(f"verb '{verb_token}' is not in the {expected_class} class")
            else:
                hard.append(f"no recognizable participle at '{verb_token}'")
    else:
        verb = lex.verb_by_past(verb_token, expected_class)
        if verb is None:
            if lex.is_past_form(verb_token):
                hard.append(f"verb '{verb_token}' is not in the {expected_class} class")
            else:
                hard.append("no recognizable past-tense verb")

    # NP slots in surface order; multi-token NPs already rejected in _parse_slots
    first_animacy = _FIRST_SLOT_ANIMACY[construction]
    second_animacy = "inanimate" if first_animacy == "animate" else "animate"
    wanted = [first_animacy, second_animacy]
    if construction in THREE_PLACE:
        wanted = ["animate"] + wanted  # agent subject comes first

    nouns: list[NounEntry | None] = []
    for np, want in zip(np_tokens, wanted):
        entry = lex.target_noun(np)
        if entry is None:
            soft.append(f"unknown noun '{np}'")
            nouns.append(None)
        elif entry.animacy != want:
            hard.append(f"'{np}' should be {want} here")
            nouns.append(None)
        else:
            nouns.append(entry)

    frame = None
    if verb is not None and not hard and not soft and all(n is not None for n in nouns):
        if construction in THREE_PLACE:
            extra, first, second = nouns
        else:
            extra = None
            first, second = nouns
        animate = first if first.animacy == "animate" else second
        inanimate = second if first.animacy == "animate" else first
        frame = PremiseFrame(
            construction=construction,
            verb=verb,
            animate_np=animate,
            inanimate_np=inanimate,
            extra_np=extra,
            plausibility="plausible",
        )
    return ParsedPremise(construction, frame, verb, tuple(hard), tuple(soft))


def _parse_slots(
    tokens: list[str], construction: str, lex: Lexicon, hard: list[str]
) -> tuple[str, list[str]] | None:
    """Split tokens into (verb token, NP head list) for one construction.

    Appends to ``hard`` and returns None when the sentence shape is beyond
    repair; otherwise returns heads even if other checks will still fail.
    """
    if not tokens or tokens[0] != "the":
        hard.append("does not start with 'the'")
        return None

    def take_np(i: int, stop: set[str]) -> tuple[str | None, int]:
        # tokens[i] is the position after a determiner
        j = i
        while j < len(tokens) and tokens[j] not in stop:
            j += 1
        span = tokens[i:j]
        if not span:
            hard.append("determiner without a noun")
            return None, j
        if len(span) > 1:
            hard.append(f"token between determiner and noun: '{' '.join(span)}'")
            return None, j
        return span[0], j

    if construction == "passive":
        if "was" not in tokens:
            hard.append("expected 'was' in a passive")
            return None
        w = tokens.index("was")
        subj, _ = take_np(1, {"was"})
        if w + 1 >= len(tokens):
            hard.append("missing participle after 'was'")
            return None
        part = tokens[w + 1]
        rest = tokens[w + 2 :]
        if not rest or rest[0] != "by":
            hard.append("expected 'by' after the participle")
            return None
        if len(rest) < 2 or rest[1] != "the":
            hard.append("expected 'the' after 'by'")
            return None
        span = rest[2:]
        if not span:
            hard.append("determiner without a noun")
            return None
        if "the" in span:
            hard.append("more NPs than the construction allows")
            return None
        if len(span) > 1:
            hard.append(f"token between determiner and noun: '{' '.join(span)}'")
            return None
        if subj is None:
            return None
        return part, [subj, span[0]]

    # actives: subject NP, verb, then one or two object NPs
    verb_idx = None
    for j in range(1, len(tokens)):
        if lex.is_past_form(tokens[j]):
            verb_idx = j
            break
    if verb_idx is None:
        hard.append("no recognizable past-tense verb")
        return None
    subj, _ = take_np(1, {tokens[verb_idx]})
    if subj is None:
        return None
    rest = tokens[verb_idx + 1 :]

    n_objects = 2 if construction in THREE_PLACE else 1
    mid = _MID_PREP.get(construction, "")
    heads = [subj]
    i = 0
    for k in range(n_objects):
        if mid and k == 1:
            if i >= len(rest) or rest[i] != mid:
                hard.append(f"expected '{mid}' before the final NP")
                return None
            i += 1
        if i >= len(rest) or rest[i] != "the":
            hard.append("missing NP: expected 'the'")
            return None
        i += 1
        j = i
        stop = {"the", "to", "for", "by"}
        while j < len(rest) and rest[j] not in stop:
            j += 1
        span = rest[i:j]
        if not span:
            hard.append("determiner without a noun")
            return None
        if len(span) > 1:
            hard.append(f"token between determiner and noun: '{' '.join(span)}'")
            return None
        heads.append(span[0])
        i = j
    if i != len(rest):
        hard.append("more NPs than the construction allows")
        return None
    return tokens[verb_idx], heads
