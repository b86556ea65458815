from collections import Counter

import pytest

from convbrowse.crawler import CrawlConfig, CrawlRecord, LinkOccurrence, crawl
from convbrowse.site_model import (GraphError, LinkStats, build_graph,
                                   canonical_anchor, compute_popularity,
                                   load_graph, save_graph)
from tests.conftest import site_fetcher, site_seed


def occ(src, tgt, anchor="x", dom_index=0, region="other"):
    return LinkOccurrence(source_url=src, target_url=tgt, anchor_text=anchor,
                          dom_index=dom_index, region=region)


def small_graph():
    records = [
        CrawlRecord(url="http://s.test/", depth=0, title="Home", outlinks=[
            occ("http://s.test/", "http://s.test/a", "News", 0, "nav"),
            occ("http://s.test/", "http://s.test/a", "News", 3, "footer"),
            occ("http://s.test/", "http://s.test/b", "About", 1, "nav"),
        ]),
        CrawlRecord(url="http://s.test/a", depth=1, title="A", outlinks=[
            occ("http://s.test/a", "http://s.test/a", "News", 2, "nav"),
            occ("http://s.test/a", "http://s.test/b", "About us", 0, "main"),
        ]),
    ]
    return build_graph(records)


def test_build_graph_counts():
    graph = small_graph()
    assert graph.seed == "http://s.test/"
    assert graph.node_count == 2
    assert graph.edge_count == 5
    assert graph.nodes["http://s.test/a"].title == "A"


def test_build_graph_rejects_duplicates_and_empty():
    with pytest.raises(GraphError):
        build_graph([])
    rec = CrawlRecord(url="http://s.test/", depth=0)
    with pytest.raises(GraphError):
        build_graph([rec, rec])


def test_popularity_counts():
    stats = compute_popularity(small_graph())
    a = stats["http://s.test/a"]
    assert a.popularity == 3
    assert a.referencing_pages == 2
    assert a.min_dom_index == 0
    assert a.region_histogram == Counter({"nav": 2, "footer": 1})
    b = stats["http://s.test/b"]
    assert b.popularity == 2
    assert b.referencing_pages == 2
    assert b.min_dom_index == 0


def test_popularity_matches_brute_force_on_fixture():
    records = crawl(CrawlConfig(seed=site_seed("newspaper")),
                    site_fetcher("newspaper"))
    graph = build_graph(records)
    stats = compute_popularity(graph)
    # Independent recount straight off the edge list.
    expect_pop = Counter(e.target_url for e in graph.edges)
    expect_pages = {
        t: len({e.source_url for e in graph.edges if e.target_url == t})
        for t in expect_pop
    }
    assert {t: s.popularity for t, s in stats.items()} == dict(expect_pop)
    assert {t: s.referencing_pages for t, s in stats.items()} == expect_pages
    for target, entry in stats.items():
        assert entry.min_dom_index == min(
            e.dom_index for e in graph.edges if e.target_url == target)


def test_canonical_anchor_majority():
    stats = LinkStats(target_url="http://s.test/a",
                      anchor_texts=Counter({"News": 3, "Latest news": 1}))
    assert canonical_anchor(stats) == "News"


def test_canonical_anchor_tie_prefers_shorter_then_lexicographic():
    stats = LinkStats(target_url="http://s.test/a",
                      anchor_texts=Counter({"Zebra": 2, "News!": 2}))
    assert canonical_anchor(stats) == "News!"  # same length, lexicographic
    stats = LinkStats(target_url="http://s.test/a",
                      anchor_texts=Counter({"Long anchor": 2, "Tiny": 2}))
    assert canonical_anchor(stats) == "Tiny"


def test_canonical_anchor_falls_back_to_path_segment():
    stats = LinkStats(target_url="http://s.test/about/contact-us.html",
                      anchor_texts=Counter({"": 4}))
    assert canonical_anchor(stats) == "contact us"


def test_save_load_round_trip(tmp_path):
    records = crawl(CrawlConfig(seed=site_seed("newspaper"), max_depth=2),
                    site_fetcher("newspaper"))
    config = CrawlConfig(seed=site_seed("newspaper"), max_depth=2)
    graph = build_graph(records, config=config, timestamp=1234.5)
    path = tmp_path / "site.graph"
    save_graph(graph, path)
    loaded = load_graph(path)
    assert loaded.seed == graph.seed
    assert loaded.nodes == graph.nodes
    assert loaded.edges == graph.edges
    assert loaded.crawl_timestamp == graph.crawl_timestamp
    assert loaded.crawl_config == config


def test_save_load_escapes_awkward_text(tmp_path):
    records = [CrawlRecord(
        url="http://s.test/", depth=0, title="Tab\there\nnewline\\slash",
        outlinks=[occ("http://s.test/", "http://s.test/a", "an\tchor\n")])]
    graph = build_graph(records, timestamp=1.0)
    path = tmp_path / "g"
    save_graph(graph, path)
    loaded = load_graph(path)
    assert loaded.nodes == graph.nodes
    assert loaded.edges == graph.edges


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "junk"
    path.write_text("not a graph\n", encoding="utf-8")
    with pytest.raises(GraphError):
        load_graph(path)
