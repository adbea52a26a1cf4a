import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import markov_corpus  # noqa: E402


@pytest.fixture(scope="session")
def small_corpus():
    """2,000 synthetic sentences shared by the cheaper corpus tests."""
    return markov_corpus(2000, seed=1234)


@pytest.fixture(scope="session")
def fusion_table():
    from vsec.corruption import build_fusion_table, default_rules_path
    return build_fusion_table(default_rules_path())
