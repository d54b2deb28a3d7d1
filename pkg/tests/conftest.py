import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from placetime import (load_date_lexicon, load_gazetteer, load_stop_words,
                       load_triggers)
from placetime.cli import DATA_DIR

CORPUS_DIR = Path(__file__).resolve().parent / "data" / "corpus"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def gaz_index():
    return load_gazetteer(DATA_DIR / "gazetteer" / "world_small.tsv")


@pytest.fixture(scope="session")
def stop_list_en():
    return load_stop_words(DATA_DIR / "stopwords" / "en.txt", "en")


@pytest.fixture(scope="session")
def trigger_index():
    return load_triggers(DATA_DIR / "triggers" / "triggers.tsv")


@pytest.fixture(scope="session")
def lexicon_en():
    return load_date_lexicon(DATA_DIR / "lexicons" / "en.lex")


@pytest.fixture(scope="session")
def lexicon_ro():
    return load_date_lexicon(DATA_DIR / "lexicons" / "ro.lex")


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS_DIR


def pytest_terminal_summary(terminalreporter):
    verdicts = getattr(sys.modules.get("test_acceptance"), "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
