import importlib.resources
from pathlib import Path

import pytest

from gelp.lexicon import load_lexicon
from gelp.seeder import load_bank

GOLDEN = Path(__file__).parent / "golden"


def packaged(*parts: str) -> Path:
    root = importlib.resources.files("gelp").joinpath("data")
    return Path(str(root.joinpath("/".join(parts))))


@pytest.fixture(scope="session")
def lex():
    return load_lexicon(packaged("lexicon", "sample_lexicon.tsv"))


@pytest.fixture(scope="session")
def bank():
    return load_bank(packaged("bank", "sample_bank.jsonl"))


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


def read_golden_tsv(name: str) -> list[list[str]]:
    rows = []
    for line in (GOLDEN / name).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rows.append(line.split("\t"))
    return rows
