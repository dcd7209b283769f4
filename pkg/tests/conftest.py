import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus as corpus_mod


@pytest.fixture(scope="session")
def corpus():
    return corpus_mod.build_corpus()
