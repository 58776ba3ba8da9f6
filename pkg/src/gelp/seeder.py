"""Premise seeding: prompt a chat-completion endpoint, then validate.

The network step is optional.  Given an existing premise bank file the
whole pipeline runs offline; the validator is the same either way and
never auto-accepts a sentence it cannot fully account for.
"""
from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable

import requests

from .constructions import CONSTRUCTIONS, CONSTRUCTION_CLASS, parse_premise
from .items import write_jsonl
from .lexicon import Lexicon

API_KEY_ENV = "GELP_API_KEY"

log = logging.getLogger(__name__)

REVIEW_STATUSES = ("auto_accepted", "needs_review", "rejected")

PROMPT_TEMPLATE = """Can you make {construction_name} with the following verbs?

Please...
1. Use an inanimate entity in {inanimate_position}.
2. Use an animate entity in {animate_position}.
3. Use past tense for the verb.
4. Use no pronouns.
5. Use no adjectives.

{verbs}"""

# plain-language construction names and the positions the two animacy
# constraints point at, per construction
_PROMPT_SLOTS = {
    "transitive": ("transitive constructions", "the object", "the subject"),
    "passive": ("passive constructions", "the subject", "the by-phrase"),
    "doc": ("double object constructions", "the second object", "the first object"),
    "dative": ("dative constructions", "the direct object", "the to-phrase"),
    "benefactive_doc": (
        "benefactive double object constructions",
        "the second object",
        "the first object",
    ),
    "benefactive_for": (
        "benefactive for constructions",
        "the direct object",
        "the for-phrase",
    ),
    "experiencer_subject": (
        "experiencer subject constructions",
        "the object",
        "the subject",
    ),
    "experiencer_object": (
        "experiencer object constructions",
        "the subject",
        "the object",
    ),
}


class SeederError(Exception):
    pass


class ApiConfigError(SeederError):
    pass


class ApiAuthError(SeederError):
    pass


class ApiRequestError(SeederError):
    pass


class ApiResponseError(SeederError):
    pass


class CandidateParseError(SeederError):
    def __init__(self, message: str, raw: str):
        self.raw = raw
        super().__init__(f"{message}; raw output follows:\n{raw}")


@dataclass(frozen=True)
class PromptSpec:
    construction_name: str
    inanimate_position: str
    animate_position: str
    verbs: tuple[str, ...]


@dataclass(frozen=True)
class CandidatePremise:
    text: str
    construction: str
    verb: str
    review_status: str
    reasons: tuple[str, ...] = ()


@dataclass(frozen=True)
class ApiConfig:
    endpoint_url: str
    model_name: str
    temperature: float = 1.0
    timeout_s: float = 60.0
    max_attempts: int = 5
    backoff_s: float = 0.5


def prompt_spec_for(construction: str, lex: Lexicon) -> PromptSpec:
    """Default prompt for a construction, using its whole verb class."""
    if construction not in CONSTRUCTIONS:
        raise SeederError(f"unknown construction {construction!r}")
    name, inanimate_pos, animate_pos = _PROMPT_SLOTS[construction]
    verbs = tuple(v.lemma for v in lex.verbs_in_class(CONSTRUCTION_CLASS[construction]))
    return PromptSpec(name, inanimate_pos, animate_pos, verbs)


def build_prompt(spec: PromptSpec) -> str:
    if not spec.verbs:
        raise SeederError("prompt spec has an empty verb list")
    return PROMPT_TEMPLATE.format(
        construction_name=spec.construction_name,
        inanimate_position=spec.inanimate_position,
        animate_position=spec.animate_position,
        verbs=", ".join(spec.verbs),
    )


def _redact(text: str, secret: str | None) -> str:
    return text.replace(secret, "[redacted]") if secret else text


def fetch_candidates(
    config: ApiConfig,
    prompt: str,
    session: requests.Session | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """POST the prompt to a chat-completion endpoint; return the raw reply text.

    Retries transient failures (timeouts, connection errors, 429, 5xx) up to
    ``max_attempts`` times with exponential backoff.  Authorization failures
    and malformed bodies raise distinct errors immediately.  The API key is
    read from the environment and never logged.
    """
    api_key = os.environ.get(API_KEY_ENV)
    if not api_key:
        raise ApiConfigError(f"environment variable {API_KEY_ENV} is not set")
    if not config.endpoint_url:
        raise ApiConfigError("endpoint_url is not configured")
    sess = session or requests.Session()
    payload = {
        "model": config.model_name,
        "temperature": config.temperature,
        "messages": [{"role": "user", "content": prompt}],
    }
    headers = {"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"}
    last_error: Exception | None = None
    for attempt in range(config.max_attempts):
        if attempt:
            delay = config.backoff_s * (2 ** (attempt - 1))
            log.info("retrying in %.1fs (attempt %d/%d)", delay, attempt + 1, config.max_attempts)
            sleep(delay)
        try:
            resp = sess.post(
                config.endpoint_url, json=payload, headers=headers, timeout=config.timeout_s
            )
        except (requests.Timeout, requests.ConnectionError) as e:
            last_error = e
            log.warning("request failed: %s", _redact(str(e), api_key))
            continue
        if resp.status_code in (401, 403):
            raise ApiAuthError(f"endpoint rejected credentials (HTTP {resp.status_code})")
        if resp.status_code == 429 or resp.status_code >= 500:
            last_error = ApiRequestError(f"HTTP {resp.status_code}")
            log.warning("transient HTTP %d from endpoint", resp.status_code)
            continue
        if resp.status_code != 200:
            raise ApiRequestError(f"unexpected HTTP {resp.status_code}: {_redact(resp.text[:500], api_key)}")
        try:
            body = resp.json()
            content = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise ApiResponseError(
                f"response body is not a chat completion: {_redact(resp.text[:500], api_key)}"
            ) from None
        if not isinstance(content, str):
            raise ApiResponseError("completion content is not a string")
        log.info("received %d characters from %s", len(content), config.model_name)
        return content
    raise ApiRequestError(
        f"giving up after {config.max_attempts} attempts: {_redact(str(last_error), api_key)}"
    )


_ENUM_PREFIX = re.compile(r"^\s*(?:\d+\s*[.)]\s*|[-*]\s+)")


def parse_candidates(raw: str) -> list[str]:
    """Split model output into trimmed candidate sentences.

    Accepts numbered or bare line-separated lists; keeps lines that end in a
    period, drops everything else (preambles, blanks).  Raises when nothing
    survives, carrying the raw text for inspection.
    """
    sentences = []
    for line in raw.replace("\r\n", "\n").split("\n"):
        line = _ENUM_PREFIX.sub("", line).strip()
        if line.endswith(".") and len(line) > 1:
            sentences.append(line)
    if not sentences:
        raise CandidateParseError("no candidate sentences found", raw)
    return sentences


def validate_premise(sentence: str, construction: str, lex: Lexicon) -> CandidatePremise:
    """Classify a candidate: auto_accepted, needs_review, or rejected.

    Hard violations (pronouns, adjectives, NP count, verb class, wrong
    animacy for a known noun) reject; unknown vocabulary only demotes to
    needs_review, never guesses.
    """
    parsed = parse_premise(sentence, construction, lex)
    if parsed.hard_violations:
        status = "rejected"
    elif parsed.uncertainties:
        status = "needs_review"
    else:
        status = "auto_accepted"
    return CandidatePremise(
        text=sentence.strip(),
        construction=construction,
        verb=parsed.verb.lemma if parsed.verb else "",
        review_status=status,
        reasons=parsed.hard_violations + parsed.uncertainties,
    )


def seed_construction(
    construction: str,
    lex: Lexicon,
    config: ApiConfig,
    session: requests.Session | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[CandidatePremise]:
    """Online path: prompt, fetch, parse, validate one construction."""
    prompt = build_prompt(prompt_spec_for(construction, lex))
    raw = fetch_candidates(config, prompt, session=session, sleep=sleep)
    return [validate_premise(s, construction, lex) for s in parse_candidates(raw)]


def revalidate_bank(
    candidates: Iterable[CandidatePremise], lex: Lexicon
) -> list[CandidatePremise]:
    """Offline path: run every bank entry through the validator again."""
    return [validate_premise(c.text, c.construction, lex) for c in candidates]


def candidate_to_obj(c: CandidatePremise) -> dict[str, Any]:
    return {
        "text": c.text,
        "construction": c.construction,
        "verb": c.verb,
        "review_status": c.review_status,
        "reasons": list(c.reasons),
    }


def load_bank(path: str | Path) -> list[CandidatePremise]:
    path = Path(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SeederError(f"{path}:{line_no}: invalid JSON: {e.msg}") from None
            for f in ("text", "construction", "verb", "review_status"):
                if f not in obj:
                    raise SeederError(f"{path}:{line_no}: missing field '{f}'")
            if obj["construction"] not in CONSTRUCTIONS:
                raise SeederError(
                    f"{path}:{line_no}: unknown construction {obj['construction']!r}"
                )
            if obj["review_status"] not in REVIEW_STATUSES:
                raise SeederError(
                    f"{path}:{line_no}: unknown review_status {obj['review_status']!r}"
                )
            out.append(
                CandidatePremise(
                    text=obj["text"],
                    construction=obj["construction"],
                    verb=obj["verb"],
                    review_status=obj["review_status"],
                    reasons=tuple(obj.get("reasons", ())),
                )
            )
    return out


def write_bank(path: str | Path, candidates: Iterable[CandidatePremise]) -> Path:
    return write_jsonl(path, (candidate_to_obj(c) for c in candidates))


def write_review_queue(path: str | Path, candidates: Iterable[CandidatePremise]) -> Path:
    """Plain-text queue of needs_review entries, one per line with reasons."""
    path = Path(path)
    lines = []
    for c in candidates:
        if c.review_status == "needs_review":
            reasons = "; ".join(c.reasons) or "unspecified"
            lines.append(f"{c.construction}\t{c.text}\t{reasons}\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(lines)
    return path
