import os

import pytest

from helpers import sample10_dataset

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def sample10():
    return sample10_dataset()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def sample10_paths():
    return (
        os.path.join(FIXTURES, "sample10.gold.tsv"),
        os.path.join(FIXTURES, "sample10.scores.tsv"),
    )


@pytest.fixture
def riskb_path():
    return os.path.join(FIXTURES, "sample10.riskb.tsv")


@pytest.fixture
def wmt_root():
    return os.path.join(FIXTURES, "wmt_mini")
