import pytest

from convbrowse.urls import NormalizationError, normalize_url, registrable_host, same_site


def test_relative_resolution():
    assert normalize_url("about.html", "http://site.test/news/") == \
        "http://site.test/news/about.html"


def test_case_port_fragment():
    assert normalize_url("HTTP://Site.Test:80/a#top") == "http://site.test/a"


def test_query_preserved():
    assert normalize_url("/covid?page=2", "http://site.test/news/x") == \
        "http://site.test/covid?page=2"


def test_empty_path_gets_slash():
    assert normalize_url("http://site.test") == "http://site.test/"


def test_https_default_port_removed():
    assert normalize_url("https://site.test:443/x") == "https://site.test/x"
    assert normalize_url("https://site.test:8443/x") == "https://site.test:8443/x"


@pytest.mark.parametrize("url", [
    "http://site.test/a?b=1#frag",
    "HTTPS://EXAMPLE.test:443/path/../other",
    "http://site.test",
])
def test_idempotence(url):
    once = normalize_url(url, "http://site.test/")
    assert normalize_url(once, "http://site.test/") == once


@pytest.mark.parametrize("bad", ["", "   ", "mailto:x@y.test", "http://", "http://host:notaport/"])
def test_malformed_raises_and_names_input(bad):
    with pytest.raises(NormalizationError):
        normalize_url(bad)


def test_registrable_host():
    assert registrable_host("http://www.site.test/a") == "site.test"
    assert registrable_host("http://site.test/") == "site.test"
    assert same_site("http://a.site.test/", "http://b.site.test/x")
    assert not same_site("http://site.test/", "http://other.test/")
