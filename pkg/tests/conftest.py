from pathlib import Path

import pytest

from convbrowse.dialog import DialogEngine
from convbrowse.fetch import Fetcher, FixtureTransport

FIXTURES = Path(__file__).parent / "fixtures"
SITES = FIXTURES / "sites"
CORPUS = FIXTURES / "corpus"
GOLDEN = FIXTURES / "golden"

SITE_IDS = ["newspaper", "sports", "reference", "health", "society", "science"]


def site_host(site_id: str) -> str:
    return f"{site_id}.fixture.test"


def site_seed(site_id: str) -> str:
    return f"http://{site_host(site_id)}/index.html"


def site_fetcher(site_id: str) -> Fetcher:
    return Fetcher(FixtureTransport({site_host(site_id): SITES / site_id}))


@pytest.fixture
def newspaper_engine() -> DialogEngine:
    return DialogEngine(site_fetcher("newspaper"))


@pytest.fixture
def newspaper_session(newspaper_engine):
    return newspaper_engine.open_session(site_seed("newspaper"))
