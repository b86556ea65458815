import random

import pytest

from convbrowse.dialog import (NORMAL_LIST_LIMIT, SHORT_LIST_LIMIT,
                               SHORT_TEXT_LIMIT, DialogEngine, SessionError)
from convbrowse.fetch import Fetcher, MappingTransport
from tests.conftest import site_seed

NEWSPAPER = "http://newspaper.fixture.test"


def check_invariants(session):
    assert session.nav_history, "history must never be empty"
    assert session.nav_history[-1] == session.current_url
    assert session.nav_history[0] == session.seed or session.current_url == session.seed
    assert session.prefs.verbosity in ("short", "normal")
    assert 1 <= session.prefs.speech_rate <= 5


def check_response(session, response):
    assert response.text
    assert isinstance(response.kind, str)
    if session.prefs.verbosity == "short":
        assert len(response.text) <= SHORT_TEXT_LIMIT
        assert len(response.items) <= SHORT_LIST_LIMIT
    else:
        assert len(response.items) <= NORMAL_LIST_LIMIT


def test_open_session_initial_state(newspaper_session):
    s = newspaper_session
    assert s.current_url == f"{NEWSPAPER}/index.html"
    assert s.nav_history == [s.current_url]
    assert s.current_title == "The Tambury Gazette"
    assert [o.label for o in s.offerings[:5]] == [
        "Home", "News", "Sports", "Health", "Contact"]
    check_invariants(s)


def test_open_session_failure_raises():
    engine = DialogEngine(Fetcher(MappingTransport({})))
    with pytest.raises(SessionError):
        engine.open_session("http://nowhere.test/")


def test_outline_enumerates_offerings(newspaper_session):
    r = newspaper_session.handle("what can I do in this website?")
    assert r.kind == "Outline"
    assert [label for _, label in r.items[:5]] == [
        "Home", "News", "Sports", "Health", "Contact"]
    assert len(r.items) == NORMAL_LIST_LIMIT
    assert '"more"' in r.text  # 10 offerings, 8 shown


def test_more_pages_the_active_list(newspaper_session):
    newspaper_session.handle("outline")
    r = newspaper_session.handle("more")
    assert r.kind == "ReadNext"
    # Absolute numbering continues where the first page stopped.
    assert r.items[0][0] == NORMAL_LIST_LIMIT + 1
    assert len(r.items) == 2  # 10 total
    r2 = newspaper_session.handle("more")
    assert r2.items == []


def test_open_ordinal_navigates(newspaper_session):
    newspaper_session.handle("outline")
    r = newspaper_session.handle("open 2")
    assert r.kind == "Navigate"
    assert newspaper_session.current_url == f"{NEWSPAPER}/news.html"
    assert "News" in r.text
    check_invariants(newspaper_session)


def test_open_ordinal_word_form(newspaper_session):
    newspaper_session.handle("outline")
    newspaper_session.handle("open number two")
    assert newspaper_session.current_url == f"{NEWSPAPER}/news.html"


def test_open_out_of_range_keeps_state(newspaper_session):
    newspaper_session.handle("outline")
    before = newspaper_session.current_url
    r = newspaper_session.handle("open 99")
    assert "no item 99" in r.text
    assert newspaper_session.current_url == before


def test_open_without_list(newspaper_session):
    r = newspaper_session.handle("open 3")
    assert "no list" in r.text.lower()


def test_navigate_fuzzy_unique(newspaper_session):
    r = newspaper_session.handle("go to the sports section")
    assert newspaper_session.current_url == f"{NEWSPAPER}/sports.html"
    assert r.kind == "Navigate"


def test_navigate_unknown_target_suggests(newspaper_session):
    before = newspaper_session.current_url
    r = newspaper_session.handle("go to the classifieds")
    assert newspaper_session.current_url == before
    assert "couldn't find" in r.text


def test_back_pops_history(newspaper_session):
    s = newspaper_session
    s.handle("go to news")
    s.handle("go to sports")
    assert [u.rsplit("/", 1)[-1] for u in s.nav_history] == [
        "index.html", "news.html", "sports.html"]
    s.handle("go back")
    assert s.current_url == f"{NEWSPAPER}/news.html"
    s.handle("back")
    assert s.current_url == f"{NEWSPAPER}/index.html"
    r = s.handle("go back")
    assert "nothing to go back to" in r.text.lower()
    assert s.nav_history == [s.seed]


def test_navigate_home_shortcut(newspaper_session):
    newspaper_session.handle("go to contact")
    newspaper_session.handle("go to the main page")
    assert newspaper_session.current_url == newspaper_session.seed
    r = newspaper_session.handle("go to the main page")
    assert "already at" in r.text


def test_ambiguous_navigation_leaves_state_unchanged():
    pages = {
        "http://amb.test/": (
            '<nav><a href="/a.html">Spring fair report</a>'
            '<a href="/b.html">Spring fair photos</a></nav>'
            "<main><p>Welcome.</p></main>"),
        "http://amb.test/a.html": "<title>A</title><main><p>A.</p></main>",
        "http://amb.test/b.html": "<title>B</title><main><p>B.</p></main>",
    }
    engine = DialogEngine(Fetcher(MappingTransport(pages)))
    session = engine.open_session("http://amb.test/")
    before = (session.current_url, list(session.nav_history))
    r = session.handle("go to spring fair")
    assert r.kind == "Navigate"
    assert "Which one" in r.text
    assert len(r.items) == 2
    assert (session.current_url, list(session.nav_history)) == before
    # The disambiguation list is live: an ordinal resolves it.
    session.handle("open 1")
    assert session.current_url == "http://amb.test/a.html"


def test_orientation_mentions_trail(newspaper_session):
    s = newspaper_session
    assert "You are at The Tambury Gazette." == s.handle("where am I?").text
    s.handle("go to news")
    r = s.handle("where am I?")
    assert r.text == ("You are at News - The Tambury Gazette, "
                      "after The Tambury Gazette.")


def test_read_start_next_stop(newspaper_session):
    s = newspaper_session
    s.handle("go to news")
    s.handle("lookup covid")
    s.handle("open 1")
    assert s.current_url == f"{NEWSPAPER}/articles/covid-19-updates.html"
    first = s.handle("read article")
    assert first.kind == "ReadStart"
    assert first.text.startswith("Local health officials confirmed")
    assert s.reading_cursor is not None
    second = s.handle("next")
    assert second.kind == "ReadNext"
    assert "End of article." in second.text  # 7 sentences: 5 + 2
    stopped = s.handle("stop")
    assert stopped.text == "Stopped reading."
    assert s.reading_cursor is None
    again = s.handle("stop")
    assert again.text == "Nothing was being read."


def test_read_empty_page():
    pages = {"http://empty.test/": "<main></main>"}
    engine = DialogEngine(Fetcher(MappingTransport(pages)))
    session = engine.open_session("http://empty.test/")
    r = session.handle("read")
    assert r.kind == "ReadStart"
    assert "Nothing to read" in r.text


def test_navigation_resets_reading(newspaper_session):
    s = newspaper_session
    s.handle("read")
    assert s.reading_cursor is not None
    s.handle("go to news")
    assert s.reading_cursor is None


def test_lookup_on_page_and_site_wide(newspaper_session):
    r = newspaper_session.handle("lookup covid")
    assert r.kind == "Lookup"
    labels = [label for _, label in r.items]
    assert "COVID-19 updates" in labels
    assert "COVID vaccine rollout" in labels
    assert "mention" in r.text  # index page body mentions COVID coverage
    assert "[link" not in r.text


def test_lookup_nothing_found(newspaper_session):
    r = newspaper_session.handle("search for quantum chromodynamics")
    assert "found nothing" in r.text


def test_overview_uses_description(newspaper_session):
    r = newspaper_session.handle("what is this website about?")
    assert r.text == ("The Tambury Gazette: Local news for Tambury: "
                      "headlines, sport, and community health updates.")


def test_about_authors_known_and_unknown(newspaper_session):
    s = newspaper_session
    assert "No author information" in s.handle("who are the authors?").text
    s.handle("lookup covid")
    s.handle("open 1")
    assert s.handle("who wrote this article?").text == "Written by J. Smith."


def test_yesno_language_from_metadata_only(newspaper_session):
    s = newspaper_session
    assert s.handle("is this page in English?").text == "Yes, the page is in English."
    assert s.handle("is this page in French?").text.startswith("No, the declared language")
    pages = {"http://nolang.test/": "<p>hello</p>"}
    engine = DialogEngine(Fetcher(MappingTransport(pages)))
    bare = engine.open_session("http://nolang.test/")
    assert bare.handle("is this page in English?").text.startswith("I don't know")


def test_summary_sentence_budget(newspaper_session):
    s = newspaper_session
    s.handle("lookup covid")
    s.handle("open 1")
    normal = s.handle("summarize this article")
    assert normal.text.count(".") >= 4
    s.handle("be brief")
    short = s.handle("summarize this article")
    assert len(short.text) <= SHORT_TEXT_LIMIT
    assert len(short.text) < len(normal.text)


def test_bookmark_dedup(newspaper_session):
    s = newspaper_session
    assert s.handle("bookmark this page").text == "Bookmarked The Tambury Gazette."
    assert "already bookmarked" in s.handle("bookmark this page").text
    assert len(s.bookmarks) == 1


def test_speech_rate_clamped(newspaper_session):
    s = newspaper_session
    for _ in range(5):
        r = s.handle("increase speech rate")
    assert r.text == "Speech rate is now 5 of 5."
    for _ in range(7):
        r = s.handle("slow down the speech")
    assert r.text == "Speech rate is now 1 of 5."


def test_short_mode_caps_every_response(newspaper_session):
    s = newspaper_session
    s.handle("turn on short interactions")
    for utterance in ("outline", "lookup covid", "summarize", "read", "next",
                      "where am I", "help", "gibberish input"):
        r = s.handle(utterance)
        check_response(s, r)
    s.handle("turn off short interactions")
    assert s.prefs.verbosity == "normal"


def test_unrecognized_suggests_capabilities(newspaper_session):
    r = newspaper_session.handle("flerb the wug")
    assert r.kind == "Unrecognized"
    assert "You can ask" in r.text


def test_open_url_reseeds_and_clears_history(newspaper_engine):
    session = newspaper_engine.open_session(site_seed("newspaper"))
    session.handle("go to news")
    r = session.handle("open newspaper.fixture.test/index.html")
    assert "history was cleared" in r.text
    assert session.nav_history == [session.seed]


def test_session_survives_internal_errors(newspaper_session, monkeypatch):
    import convbrowse.dialog as dialog_module

    def boom(*args, **kwargs):
        raise RuntimeError("injected")

    monkeypatch.setattr(dialog_module.heuristics, "lookup", boom)
    r = newspaper_session.handle("lookup covid")
    assert "still alive" in r.text
    check_invariants(newspaper_session)
    # And the session keeps working afterwards.
    monkeypatch.undo()
    assert newspaper_session.handle("where am I").kind == "Orientation"


UTTERANCES = [
    "outline", "where am I", "go to news", "go to sports", "go back",
    "open 1", "open 2", "open 9", "lookup covid", "lookup festival",
    "read", "next", "more", "stop", "summarize", "who wrote this",
    "is this page in english", "bookmark", "increase speech rate",
    "slow down the speech", "be brief", "turn off short interactions",
    "help", "wibble wobble", "next article", "go to the main page",
]


def test_random_utterance_sequences_preserve_invariants(newspaper_session):
    rng = random.Random(42)
    for _ in range(120):
        utterance = rng.choice(UTTERANCES)
        response = newspaper_session.handle(utterance)
        check_invariants(newspaper_session)
        check_response(newspaper_session, response)
    assert len(newspaper_session.conversation_history) == 120


def test_history_matches_plain_stack_oracle(newspaper_session):
    s = newspaper_session
    pages = [f"{NEWSPAPER}/news.html", f"{NEWSPAPER}/sports.html",
             f"{NEWSPAPER}/health.html", f"{NEWSPAPER}/contact.html"]
    rng = random.Random(7)
    stack = [s.seed]
    for _ in range(60):
        if rng.random() < 0.5:
            url = rng.choice(pages)
            s.navigate_to(url)
            stack.append(url)
        else:
            s.handle("go back")
            if len(stack) > 1:
                stack.pop()
        assert s.nav_history == stack
        assert s.current_url == stack[-1]
