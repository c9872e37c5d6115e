from pathlib import Path

import pytest

from syntagma.engine import ParseConfig, parse
from syntagma.resources import load_resources

DATA = Path(__file__).resolve().parents[1] / "src" / "syntagma" / "data"


@pytest.fixture(scope="session")
def en():
    return load_resources(DATA / "en")


@pytest.fixture(scope="session")
def it():
    return load_resources(DATA / "it")


def run(res, text, profile="strict"):
    return parse(text, res.grammar, res.lexicon, res.semnet,
                 ParseConfig(profile=profile, pairs=res.pairs))


@pytest.fixture(scope="session")
def parse_with():
    return run
