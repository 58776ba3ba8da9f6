#!/usr/bin/env python3
"""Regenerate the packaged sample lexicon and premise bank.

Writes src/gelp/data/lexicon/sample_lexicon.tsv and
src/gelp/data/bank/sample_bank.jsonl.  The bank holds 80 plausible premises
per construction (40 verbs x 2 objects), every one auto-accepted by the
validator and byte-identical to its canonical realization.  Run from the
repository root:

    python scripts/build_sample_data.py
"""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from gelp.constructions import (  # noqa: E402
    CONSTRUCTIONS,
    CONSTRUCTION_CLASS,
    PremiseFrame,
    THREE_PLACE,
    realize_premise,
)
from gelp.lexicon import NounEntry, VerbEntry, load_lexicon  # noqa: E402
from gelp.seeder import CandidatePremise, validate_premise, write_bank  # noqa: E402

# ---------------------------------------------------------------- verbs

TARGET_VERBS = {
    "transitive": """
        assemble bend bite blend carve chop clean collect cut describe
        design destroy draw flatten fold hack hammer hit kick knock
        make memorize pound produce protect punch push read saw save
        shatter skip slash slice smash squash suggest touch use waste
    """,
    "ditransitive": """
        allocate assign award bring email extend fax feed forward give
        grant hand haul issue lend lease leave loan mail offer
        owe pass pay post promise refund relay repay sell send
        serve ship show slip smuggle take teach tell trade write
    """,
    "benefactive": """
        arrange assemble bake book boil build buy carve cash catch
        charter clean compile cook cut design develop earn find fix
        get grill grow keep knit make order paint pick prepare
        rent reserve roll save secure set shape steal wash write
    """,
    "experiencer_subject": """
        abhor admire adore appreciate cherish covet crave deplore desire despise
        disdain dislike distrust dread enjoy envy exalt execrate favor fear
        hate lament like loathe love miss mourn need pity regret
        relish resent savor tolerate treasure trust value venerate want worship
    """,
    "experiencer_object": """
        agonize amaze amuse anger annoy arouse astonish bore bother calm
        captivate comfort confuse convince depress devastate disappoint discourage disgust disturb
        displease embarrass encourage enlighten excite frighten frustrate impress irritate please
        puzzle sadden satisfy shock surprise terrify threaten thrill upset worry
    """,
}

FILLER_VERBS = """
    follow visit watch greet help thank meet invite chase hug
    warn praise blame hire consult interview escort applaud welcome scold
    rescue ignore approach obey
"""

# (past, participle) where the regular rules do not apply
IRREGULAR = {
    "bend": ("bent", "bent"),
    "bite": ("bit", "bitten"),
    "bring": ("brought", "brought"),
    "build": ("built", "built"),
    "buy": ("bought", "bought"),
    "catch": ("caught", "caught"),
    "cut": ("cut", "cut"),
    "draw": ("drew", "drawn"),
    "feed": ("fed", "fed"),
    "find": ("found", "found"),
    "get": ("got", "gotten"),
    "give": ("gave", "given"),
    "grow": ("grew", "grown"),
    "hit": ("hit", "hit"),
    "keep": ("kept", "kept"),
    "leave": ("left", "left"),
    "lend": ("lent", "lent"),
    "make": ("made", "made"),
    "meet": ("met", "met"),
    "pay": ("paid", "paid"),
    "read": ("read", "read"),
    "saw": ("sawed", "sawn"),
    "sell": ("sold", "sold"),
    "send": ("sent", "sent"),
    "set": ("set", "set"),
    "show": ("showed", "shown"),
    "steal": ("stole", "stolen"),
    "take": ("took", "taken"),
    "teach": ("taught", "taught"),
    "tell": ("told", "told"),
    "upset": ("upset", "upset"),
    "write": ("wrote", "written"),
}

# final consonant doubles before -ed
DOUBLE_FINAL = {"chop", "skip", "knit", "slip", "ship", "regret", "worship", "abhor", "hug"}

VOWELS = set("aeiou")


def inflect(lemma: str) -> tuple[str, str]:
    if lemma in IRREGULAR:
        return IRREGULAR[lemma]
    if lemma in DOUBLE_FINAL:
        past = lemma + lemma[-1] + "ed"
    elif lemma.endswith("e"):
        past = lemma + "d"
    elif lemma.endswith("y") and lemma[-2] not in VOWELS:
        past = lemma[:-1] + "ied"
    else:
        past = lemma + "ed"
    return past, past


# ---------------------------------------------------------------- nouns

# subjects / recipients / beneficiaries / experiencers
PEOPLE = """
    boy girl man woman teacher student child worker cook farmer
    artist writer driver neighbor customer waiter uncle aunt brother sister
    father mother grandfather grandmother
""".split()

# two sensible inanimate arguments per verb, keyed by class
OBJECTS = {
    "transitive": {
        "assemble": ("shelf", "desk"), "bend": ("wire", "spoon"),
        "bite": ("apple", "sandwich"), "blend": ("soup", "sauce"),
        "carve": ("statue", "pumpkin"), "chop": ("onion", "carrot"),
        "clean": ("window", "floor"), "collect": ("stamp", "coin"),
        "cut": ("rope", "paper"), "describe": ("painting", "scene"),
        "design": ("poster", "logo"), "destroy": ("wall", "fence"),
        "draw": ("portrait", "map"), "flatten": ("dough", "box"),
        "fold": ("napkin", "towel"), "hack": ("log", "branch"),
        "hammer": ("nail", "peg"), "hit": ("drum", "target"),
        "kick": ("ball", "door"), "knock": ("vase", "lamp"),
        "make": ("cake", "chair"), "memorize": ("poem", "speech"),
        "pound": ("steak", "dough"), "produce": ("film", "album"),
        "protect": ("castle", "garden"), "punch": ("bag", "pillow"),
        "push": ("cart", "sled"), "read": ("book", "letter"),
        "saw": ("plank", "log"), "save": ("ticket", "photo"),
        "shatter": ("mirror", "glass"), "skip": ("chapter", "lesson"),
        "slash": ("tire", "curtain"), "slice": ("bread", "melon"),
        "smash": ("window", "bottle"), "squash": ("tomato", "grape"),
        "suggest": ("plan", "idea"), "touch": ("screen", "statue"),
        "use": ("ladder", "spoon"), "waste": ("paper", "water"),
    },
    "ditransitive": {
        "allocate": ("budget", "fund"), "assign": ("task", "essay"),
        "award": ("medal", "prize"), "bring": ("basket", "umbrella"),
        "email": ("report", "invoice"), "extend": ("deadline", "contract"),
        "fax": ("document", "form"), "feed": ("soup", "porridge"),
        "forward": ("message", "memo"), "give": ("apple", "book"),
        "grant": ("permit", "license"), "hand": ("towel", "plate"),
        "haul": ("crate", "cargo"), "issue": ("passport", "ticket"),
        "lend": ("bicycle", "pencil"), "lease": ("apartment", "tractor"),
        "leave": ("note", "tip"), "loan": ("guitar", "camera"),
        "mail": ("package", "postcard"), "offer": ("job", "discount"),
        "owe": ("money", "fare"), "pass": ("salt", "dish"),
        "pay": ("fee", "wage"), "post": ("parcel", "letter"),
        "promise": ("reward", "bonus"), "refund": ("deposit", "fare"),
        "relay": ("signal", "news"), "repay": ("debt", "favor"),
        "sell": ("car", "house"), "send": ("gift", "invitation"),
        "serve": ("dinner", "tea"), "ship": ("furniture", "box"),
        "show": ("photo", "painting"), "slip": ("coin", "key"),
        "smuggle": ("diamond", "statue"), "take": ("lunch", "blanket"),
        "teach": ("lesson", "song"), "tell": ("story", "secret"),
        "trade": ("card", "marble"), "write": ("poem", "letter"),
    },
    "benefactive": {
        "arrange": ("bouquet", "meeting"), "assemble": ("bookcase", "swing"),
        "bake": ("cake", "pie"), "book": ("room", "flight"),
        "boil": ("egg", "potato"), "build": ("cabin", "shed"),
        "buy": ("cup", "hat"), "carve": ("toy", "whistle"),
        "cash": ("check", "voucher"), "catch": ("fish", "ball"),
        "charter": ("boat", "bus"), "clean": ("oven", "carpet"),
        "compile": ("list", "index"), "cook": ("stew", "rice"),
        "cut": ("melon", "cloth"), "design": ("dress", "kitchen"),
        "develop": ("film", "plan"), "earn": ("salary", "medal"),
        "find": ("wallet", "umbrella"), "fix": ("fence", "radio"),
        "get": ("ticket", "snack"), "grill": ("steak", "sausage"),
        "grow": ("tomato", "pumpkin"), "keep": ("seat", "place"),
        "knit": ("scarf", "sweater"), "make": ("bread", "chair"),
        "order": ("pizza", "salad"), "paint": ("mural", "portrait"),
        "pick": ("flower", "berry"), "prepare": ("meal", "speech"),
        "rent": ("truck", "cottage"), "reserve": ("table", "room"),
        "roll": ("blanket", "mat"), "save": ("cookie", "seat"),
        "secure": ("ticket", "permit"), "set": ("table", "alarm"),
        "shape": ("vase", "bowl"), "steal": ("jewel", "purse"),
        "wash": ("shirt", "dish"), "write": ("letter", "song"),
    },
    "experiencer_subject": {
        "abhor": ("noise", "mess"), "admire": ("painting", "castle"),
        "adore": ("melody", "garden"), "appreciate": ("gift", "gesture"),
        "cherish": ("photo", "memory"), "covet": ("crown", "jewel"),
        "crave": ("chocolate", "sugar"), "deplore": ("violence", "litter"),
        "desire": ("fame", "wealth"), "despise": ("traffic", "clutter"),
        "disdain": ("gossip", "luxury"), "dislike": ("rain", "noise"),
        "distrust": ("rumor", "shortcut"), "dread": ("exam", "winter"),
        "enjoy": ("music", "picnic"), "envy": ("mansion", "yacht"),
        "exalt": ("virtue", "courage"), "execrate": ("crime", "cruelty"),
        "favor": ("plan", "option"), "fear": ("storm", "thunder"),
        "hate": ("homework", "traffic"), "lament": ("loss", "ruin"),
        "like": ("book", "song"), "loathe": ("smell", "stain"),
        "love": ("sunset", "beach"), "miss": ("train", "bus"),
        "mourn": ("loss", "farm"), "need": ("money", "rest"),
        "pity": ("town", "village"), "regret": ("decision", "mistake"),
        "relish": ("victory", "meal"), "resent": ("rule", "curfew"),
        "savor": ("coffee", "dessert"), "tolerate": ("heat", "dust"),
        "treasure": ("necklace", "letter"), "trust": ("map", "compass"),
        "value": ("honesty", "friendship"), "venerate": ("shrine", "relic"),
        "want": ("toy", "candy"), "worship": ("idol", "sun"),
    },
    "experiencer_object": {
        "agonize": ("decision", "delay"), "amaze": ("trick", "view"),
        "amuse": ("joke", "cartoon"), "anger": ("insult", "delay"),
        "annoy": ("noise", "alarm"), "arouse": ("speech", "music"),
        "astonish": ("result", "trick"), "bore": ("lecture", "sermon"),
        "bother": ("smell", "smoke"), "calm": ("melody", "tea"),
        "captivate": ("story", "view"), "comfort": ("blanket", "soup"),
        "confuse": ("puzzle", "sign"), "convince": ("evidence", "letter"),
        "depress": ("weather", "news"), "devastate": ("flood", "fire"),
        "disappoint": ("result", "score"), "discourage": ("failure", "forecast"),
        "disgust": ("garbage", "slime"), "disturb": ("thunder", "siren"),
        "displease": ("mess", "verdict"), "embarrass": ("photo", "stain"),
        "encourage": ("progress", "grade"), "enlighten": ("essay", "museum"),
        "excite": ("parade", "game"), "frighten": ("mask", "shadow"),
        "frustrate": ("printer", "traffic"), "impress": ("trophy", "mansion"),
        "irritate": ("buzzer", "draft"), "please": ("gift", "song"),
        "puzzle": ("riddle", "map"), "sadden": ("news", "ballad"),
        "satisfy": ("verdict", "salary"), "shock": ("price", "scandal"),
        "surprise": ("party", "letter"), "terrify": ("earthquake", "nightmare"),
        "threaten": ("flood", "deadline"), "thrill": ("race", "concert"),
        "upset": ("defeat", "delay"), "worry": ("debt", "rumor"),
    },
}

FILLER_NOUNS = """
    singer dancer doctor nurse lawyer judge pilot sailor soldier painter
    poet actor baker plumber tailor barber merchant banker clerk guard
    mayor priest monk knight queen king prince princess coach referee
    athlete swimmer runner climber tourist librarian cashier janitor tutor scientist
    engineer chemist biologist historian senator captain colonel sheriff
""".split()


def build_rows():
    rows = []
    all_pasts = set()
    all_parts = set()
    for vclass, blob in TARGET_VERBS.items():
        lemmas = blob.split()
        assert len(lemmas) == 40, f"{vclass}: {len(lemmas)} lemmas"
        assert len(set(lemmas)) == 40, f"{vclass}: duplicate lemma"
        for lemma in lemmas:
            past, part = inflect(lemma)
            rows.append(("verb", lemma, past, part, vclass, ""))
            all_pasts.add(past)
            all_parts.add(part)
    filler_lemmas = FILLER_VERBS.split()
    assert len(set(filler_lemmas)) == len(filler_lemmas)
    target_lemmas = {l for blob in TARGET_VERBS.values() for l in blob.split()}
    assert not set(filler_lemmas) & target_lemmas, "filler verbs overlap target verbs"
    for lemma in filler_lemmas:
        past, part = inflect(lemma)
        rows.append(("verb", lemma, past, part, "filler_transitive", ""))
        all_pasts.add(past)
        all_parts.add(part)

    inanimates = sorted({n for table in OBJECTS.values() for pair in table.values() for n in pair})
    assert len(set(PEOPLE)) == len(PEOPLE) == 24
    assert not set(PEOPLE) & set(inanimates)
    target_nouns = set(PEOPLE) | set(inanimates)
    assert len(set(FILLER_NOUNS)) == len(FILLER_NOUNS)
    assert not set(FILLER_NOUNS) & target_nouns, "filler nouns overlap target nouns"

    # the premise parser keys on past forms, so no noun may look like one
    clash = (target_nouns | set(FILLER_NOUNS)) & (all_pasts | all_parts)
    assert not clash, f"noun surfaces collide with verb forms: {sorted(clash)}"
    reserved = {"the", "was", "by", "to", "for", "did"}
    assert not (target_nouns | set(FILLER_NOUNS)) & reserved

    for noun in PEOPLE:
        rows.append(("noun", noun, "", "", "", "animate"))
    for noun in inanimates:
        rows.append(("noun", noun, "", "", "", "inanimate"))
    for noun in FILLER_NOUNS:
        rows.append(("noun", noun, "", "", "filler", "animate"))
    return rows


def write_lexicon(path: Path, rows) -> None:
    lines = [
        "# sample inventory: kind\tsurface\tpast\tparticiple\tclass\tanimacy",
        "# verbs carry inflections and a class; nouns carry animacy,",
        "# with 'filler' in the class column for the filler inventory.",
    ]
    lines += ["\t".join(r) for r in rows]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build_bank(lex) -> list:
    by_surface = {}
    for animacy in ("animate", "inanimate"):
        for n in lex.target_nouns(animacy):
            by_surface[n.surface] = n

    def verb_entry(vclass: str, lemma: str) -> VerbEntry:
        for v in lex.verbs_in_class(vclass):
            if v.lemma == lemma:
                return v
        raise KeyError(lemma)

    candidates = []
    for construction in CONSTRUCTIONS:
        vclass = CONSTRUCTION_CLASS[construction]
        lemmas = TARGET_VERBS[vclass].split()
        texts = set()
        for vi, lemma in enumerate(lemmas):
            verb = verb_entry(vclass, lemma)
            pair = OBJECTS[vclass][lemma]
            for k in (0, 1):
                person = by_surface[PEOPLE[(vi * 2 + k) % len(PEOPLE)]]
                extra = None
                if construction in THREE_PLACE:
                    extra = by_surface[PEOPLE[(vi * 2 + k + 7) % len(PEOPLE)]]
                frame = PremiseFrame(
                    construction=construction,
                    verb=verb,
                    animate_np=person,
                    inanimate_np=by_surface[pair[k]],
                    extra_np=extra,
                    plausibility="plausible",
                )
                text = realize_premise(frame)
                assert text not in texts, f"duplicate premise: {text}"
                texts.add(text)
                cand = validate_premise(text, construction, lex)
                assert cand.review_status == "auto_accepted", (
                    f"{construction}: {text!r} -> {cand.review_status}: {cand.reasons}"
                )
                candidates.append(cand)
        assert len(texts) == 80
    return candidates


def main() -> None:
    lex_path = ROOT / "src/gelp/data/lexicon/sample_lexicon.tsv"
    bank_path = ROOT / "src/gelp/data/bank/sample_bank.jsonl"

    write_lexicon(lex_path, build_rows())
    lex = load_lexicon(lex_path, mode="sample")
    candidates = build_bank(lex)
    assert len(candidates) == 640
    bank_path.parent.mkdir(parents=True, exist_ok=True)
    write_bank(bank_path, candidates)
    print(f"wrote {lex_path.relative_to(ROOT)} and {bank_path.relative_to(ROOT)}")
    print(f"{len(candidates)} premises, all auto_accepted")


if __name__ == "__main__":
    main()
