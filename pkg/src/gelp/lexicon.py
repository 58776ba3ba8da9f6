"""Verb and noun inventories behind premise generation.

Lexicon files are line-oriented UTF-8 with six tab-separated columns:

    kind  surface  past  participle  class  animacy

``kind`` is ``verb`` or ``noun``; unused columns stay empty; ``#`` starts
a comment line.  Verb rows fill past/participle/class, noun rows fill
animacy, and a noun row with ``filler`` in the class column belongs to
the filler inventory rather than the target one.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

VERB_CLASSES = (
    "transitive",
    "ditransitive",
    "benefactive",
    "experiencer_subject",
    "experiencer_object",
    "filler_transitive",
)
TARGET_CLASSES = VERB_CLASSES[:5]
ANIMACIES = ("animate", "inanimate")

# strict-mode inventory sizes
TARGET_CLASS_SIZE = 40
STRICT_FILLER_VERBS = 201
STRICT_FILLER_NOUNS = 515


class LexiconError(Exception):
    pass


class LexiconParseError(LexiconError):
    def __init__(self, path: Path | str, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class LexiconValidationError(LexiconError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"lexicon failed validation: {lines}")


@dataclass(frozen=True)
class VerbEntry:
    lemma: str
    past: str
    participle: str
    verb_class: str


@dataclass(frozen=True)
class NounEntry:
    surface: str
    animacy: str


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    entries: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"[{v.code}] {v.message}" for v in self.violations)


def _is_word(tok: str) -> bool:
    return bool(tok) and all(c.isalpha() or c == "-" for c in tok) and tok == tok.lower()


class Lexicon:
    """Immutable verb/noun inventory with load order preserved."""

    def __init__(
        self,
        verbs: dict[str, list[VerbEntry]],
        target_nouns: dict[str, list[NounEntry]],
        filler_nouns: list[NounEntry],
    ):
        self._verbs = {c: tuple(verbs.get(c, ())) for c in VERB_CLASSES}
        self._target_nouns = {a: tuple(target_nouns.get(a, ())) for a in ANIMACIES}
        self._filler_nouns = tuple(filler_nouns)

        self._target_noun_index = {
            n.surface: n for ns in self._target_nouns.values() for n in ns
        }
        self._filler_noun_index = {n.surface: n for n in self._filler_nouns}

        # past form -> lemma, for do-support.  Identity inflections (cut/cut)
        # are fine; the same lemma may appear in several classes.  Two
        # different lemmas sharing a past form make the lookup ambiguous and
        # are reported by validate_lexicon.
        self._past_to_lemma: dict[str, str] = {}
        self._ambiguous_pasts: set[str] = set()
        self._past_index: dict[str, list[VerbEntry]] = {}
        self._participles: set[str] = set()
        for entries in self._verbs.values():
            for v in entries:
                known = self._past_to_lemma.get(v.past)
                if known is not None and known != v.lemma:
                    self._ambiguous_pasts.add(v.past)
                else:
                    self._past_to_lemma[v.past] = v.lemma
                self._past_index.setdefault(v.past, []).append(v)
                self._participles.add(v.participle)

    def verbs_in_class(self, verb_class: str) -> tuple[VerbEntry, ...]:
        if verb_class not in VERB_CLASSES:
            raise LexiconError(f"unknown verb class {verb_class!r}")
        return self._verbs[verb_class]

    @property
    def filler_verbs(self) -> tuple[VerbEntry, ...]:
        return self._verbs["filler_transitive"]

    def target_nouns(self, animacy: str) -> tuple[NounEntry, ...]:
        if animacy not in ANIMACIES:
            raise LexiconError(f"unknown animacy {animacy!r}")
        return self._target_nouns[animacy]

    @property
    def filler_nouns(self) -> tuple[NounEntry, ...]:
        return self._filler_nouns

    def target_noun(self, surface: str) -> NounEntry | None:
        return self._target_noun_index.get(surface)

    def filler_noun(self, surface: str) -> NounEntry | None:
        return self._filler_noun_index.get(surface)

    def is_past_form(self, token: str) -> bool:
        return token in self._past_index

    def is_participle(self, token: str) -> bool:
        return token in self._participles

    def verb_by_past(self, past: str, verb_class: str | None = None) -> VerbEntry | None:
        """First entry whose past form matches, optionally within one class."""
        for entry in self._past_index.get(past, ()):
            if verb_class is None or entry.verb_class == verb_class:
                return entry
        return None

    def base_form(self, past: str) -> str:
        if past in self._ambiguous_pasts:
            raise LookupError(f"past form {past!r} maps to more than one lemma")
        try:
            return self._past_to_lemma[past]
        except KeyError:
            raise LookupError(f"no verb with past form {past!r}") from None

    @property
    def ambiguous_pasts(self) -> frozenset[str]:
        return frozenset(self._ambiguous_pasts)


def load_lexicon(path: str | Path, mode: str = "sample") -> Lexicon:
    """Parse a lexicon file and validate it under the given mode.

    ``strict`` enforces the full inventory sizes (40 verbs per target class,
    201 filler verbs, 515 filler nouns); ``sample`` relaxes the counts but
    keeps every structural constraint, filler/target disjointness included.
    """
    if mode not in ("strict", "sample"):
        raise LexiconError(f"unknown lexicon mode {mode!r}")
    path = Path(path)
    verbs: dict[str, list[VerbEntry]] = {c: [] for c in VERB_CLASSES}
    target_nouns: dict[str, list[NounEntry]] = {a: [] for a in ANIMACIES}
    filler_nouns: list[NounEntry] = []

    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 6:
                raise LexiconParseError(
                    path, line_no, f"expected 6 tab-separated columns, got {len(cols)}"
                )
            kind, surface, past, participle, vclass, animacy = (c.strip() for c in cols)
            if kind == "verb":
                if not (_is_word(surface) and _is_word(past) and _is_word(participle)):
                    raise LexiconParseError(
                        path, line_no, "verb rows need lowercase single-token lemma/past/participle"
                    )
                if vclass not in VERB_CLASSES:
                    raise LexiconParseError(path, line_no, f"unknown verb class {vclass!r}")
                if animacy:
                    raise LexiconParseError(path, line_no, "verb rows leave the animacy column empty")
                verbs[vclass].append(VerbEntry(surface, past, participle, vclass))
            elif kind == "noun":
                if not _is_word(surface):
                    raise LexiconParseError(path, line_no, "noun surface must be a lowercase single token")
                if animacy not in ANIMACIES:
                    raise LexiconParseError(path, line_no, f"unknown animacy {animacy!r}")
                if past or participle:
                    raise LexiconParseError(path, line_no, "noun rows leave past/participle empty")
                if vclass == "filler":
                    filler_nouns.append(NounEntry(surface, animacy))
                elif vclass == "":
                    target_nouns[animacy].append(NounEntry(surface, animacy))
                else:
                    raise LexiconParseError(
                        path, line_no, f"noun class column must be empty or 'filler', got {vclass!r}"
                    )
            else:
                raise LexiconParseError(path, line_no, f"unknown row kind {kind!r}")

    lex = Lexicon(verbs, target_nouns, filler_nouns)
    report = validate_lexicon(lex, mode)
    if not report.ok:
        raise LexiconValidationError(report)
    return lex


def validate_lexicon(lex: Lexicon, mode: str = "sample") -> ValidationReport:
    """Check inventory invariants; returns an empty report iff all hold."""
    if mode not in ("strict", "sample"):
        raise LexiconError(f"unknown lexicon mode {mode!r}")
    violations: list[Violation] = []

    for vclass in VERB_CLASSES:
        entries = lex.verbs_in_class(vclass)
        seen: dict[str, int] = {}
        for v in entries:
            seen[v.lemma] = seen.get(v.lemma, 0) + 1
        dups = tuple(l for l, n in seen.items() if n > 1)
        if dups:
            violations.append(
                Violation("duplicate_lemma", f"class {vclass} repeats lemmas: {', '.join(dups)}", dups)
            )

    for animacy in ANIMACIES:
        surfaces = [n.surface for n in lex.target_nouns(animacy)]
        dups = tuple(sorted({s for s in surfaces if surfaces.count(s) > 1}))
        if dups:
            violations.append(
                Violation("duplicate_noun", f"{animacy} target nouns repeat: {', '.join(dups)}", dups)
            )
    filler_surfaces = [n.surface for n in lex.filler_nouns]
    dups = tuple(sorted({s for s in filler_surfaces if filler_surfaces.count(s) > 1}))
    if dups:
        violations.append(Violation("duplicate_noun", f"filler nouns repeat: {', '.join(dups)}", dups))

    bad_fillers = tuple(n.surface for n in lex.filler_nouns if n.animacy != "animate")
    if bad_fillers:
        violations.append(
            Violation("filler_noun_animacy", f"filler nouns must be animate: {', '.join(bad_fillers)}", bad_fillers)
        )

    # filler vocabulary stays out of target premises entirely
    target_lemmas = {v.lemma for c in TARGET_CLASSES for v in lex.verbs_in_class(c)}
    overlap = tuple(sorted({v.lemma for v in lex.filler_verbs} & target_lemmas))
    if overlap:
        violations.append(
            Violation("filler_verb_overlap", f"filler verbs overlap target classes: {', '.join(overlap)}", overlap)
        )
    target_surfaces = {n.surface for a in ANIMACIES for n in lex.target_nouns(a)}
    overlap = tuple(sorted({n.surface for n in lex.filler_nouns} & target_surfaces))
    if overlap:
        violations.append(
            Violation("filler_noun_overlap", f"filler nouns overlap target nouns: {', '.join(overlap)}", overlap)
        )

    if lex.ambiguous_pasts:
        amb = tuple(sorted(lex.ambiguous_pasts))
        violations.append(
            Violation("ambiguous_past", f"past forms map to several lemmas: {', '.join(amb)}", amb)
        )

    if mode == "strict":
        for vclass in TARGET_CLASSES:
            n = len(lex.verbs_in_class(vclass))
            if n != TARGET_CLASS_SIZE:
                violations.append(
                    Violation("class_size", f"class {vclass} has {n} verbs, strict mode requires {TARGET_CLASS_SIZE}")
                )
        n = len(lex.filler_verbs)
        if n != STRICT_FILLER_VERBS:
            violations.append(
                Violation("filler_verb_count", f"{n} filler verbs, strict mode requires {STRICT_FILLER_VERBS}")
            )
        n = len(lex.filler_nouns)
        if n != STRICT_FILLER_NOUNS:
            violations.append(
                Violation("filler_noun_count", f"{n} filler nouns, strict mode requires {STRICT_FILLER_NOUNS}")
            )

    return ValidationReport(tuple(violations))


def base_form(lex: Lexicon, past: str) -> str:
    """Lemma whose past field equals ``past`` (e.g. for do-support)."""
    return lex.base_form(past)
