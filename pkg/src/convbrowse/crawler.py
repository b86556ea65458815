"""Breadth-first site crawl bounded by depth and page count.

The frontier is ordered by (depth, discovery order); discovery order is
(parent visit index, dom_index). Workers fetch one depth level concurrently
but results commit in frontier order, so the record list is deterministic
regardless of worker count.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .dom import Node, parse_html
from .fetch import FetchError, Fetcher, PageSource
from .urls import NormalizationError, normalize_url, registrable_host

log = logging.getLogger(__name__)

REGIONS = ("header", "nav", "main", "footer", "aside", "other")

# Explicit ARIA role beats the tag-implied region.
_ROLE_TO_REGION = {
    "banner": "header",
    "navigation": "nav",
    "main": "main",
    "contentinfo": "footer",
    "complementary": "aside",
}
_TAG_TO_REGION = {
    "header": "header",
    "nav": "nav",
    "main": "main",
    "footer": "footer",
    "aside": "aside",
}

_SKIP_SCHEMES = ("mailto:", "javascript:", "tel:", "data:")


class CrawlError(Exception):
    pass


@dataclass
class CrawlConfig:
    seed: str
    max_depth: int = 3
    max_pages: int = 100
    ttl_seconds: int = 24 * 3600
    worker_count: int = 4

    def __post_init__(self) -> None:
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.max_pages < 1:
            raise ValueError("max_pages must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")


@dataclass(frozen=True)
class LinkOccurrence:
    source_url: str
    target_url: str
    anchor_text: str
    dom_index: int
    region: str = "other"


@dataclass
class CrawlRecord:
    url: str
    depth: int
    outlinks: list[LinkOccurrence] = field(default_factory=list)
    title: str = ""
    fetch_status: str = "200"


def _region_of(anchor: Node) -> str:
    """Region from the nearest enclosing landmark/sectioning ancestor."""
    for ancestor in anchor.ancestors():
        role = ancestor.get("role").strip().lower()
        if role in _ROLE_TO_REGION:
            return _ROLE_TO_REGION[role]
        if role:
            continue
        if ancestor.tag in _TAG_TO_REGION:
            return _TAG_TO_REGION[ancestor.tag]
    return "other"


def _anchor_text(anchor: Node) -> str:
    text = anchor.text()
    if text:
        return text
    images = [c for c in anchor.children if isinstance(c, Node) and c.tag == "img"]
    if len(images) == 1:
        return images[0].get("alt").strip()
    return ""


def extract_outlinks(source: PageSource) -> list[LinkOccurrence]:
    """One occurrence per anchor with a resolvable href, in document order."""
    dom = parse_html(source.body)
    return _outlinks_from_dom(dom, source.url)


def _outlinks_from_dom(dom: Node, page_url: str) -> list[LinkOccurrence]:
    occurrences: list[LinkOccurrence] = []
    for anchor in dom.find_all("a"):
        href = anchor.get("href").strip()
        if not href or href.startswith("#"):
            continue
        if href.lower().startswith(_SKIP_SCHEMES):
            continue
        try:
            target = normalize_url(href, base=page_url)
        except NormalizationError:
            continue
        occurrences.append(LinkOccurrence(
            source_url=page_url,
            target_url=target,
            anchor_text=_anchor_text(anchor),
            dom_index=len(occurrences),
            region=_region_of(anchor),
        ))
    return occurrences


def _page_title(dom: Node, url: str) -> str:
    title = dom.find("title")
    if title is not None and title.text():
        return title.text()
    h1 = dom.find("h1")
    if h1 is not None and h1.text():
        return h1.text()
    return url


def crawl(config: CrawlConfig, fetcher: Fetcher) -> list[CrawlRecord]:
    """BFS from the seed; off-origin links are recorded but never fetched."""
    seed = normalize_url(config.seed)
    site = frozenset({registrable_host(seed)})
    seen = {seed}
    frontier: deque[tuple[str, int]] = deque([(seed, 0)])
    records: list[CrawlRecord] = []

    def fetch_one(url: str) -> PageSource | FetchError:
        try:
            return fetcher.fetch(url, allowed_hosts=site)
        except FetchError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
        while frontier and len(records) < config.max_pages:
            depth = frontier[0][1]
            batch: list[str] = []
            while (frontier and frontier[0][1] == depth
                   and len(records) + len(batch) < config.max_pages):
                batch.append(frontier.popleft()[0])
            for url, result in zip(batch, pool.map(fetch_one, batch)):
                if isinstance(result, FetchError):
                    if not records and url == seed:
                        raise CrawlError(f"seed fetch failed: {result}") from result
                    log.info("skipping %s: %s", url, result)
                    records.append(CrawlRecord(
                        url=url, depth=depth,
                        fetch_status=f"error:{type(result).__name__}"))
                    continue
                dom = parse_html(result.body)
                outlinks = _outlinks_from_dom(dom, url)
                records.append(CrawlRecord(
                    url=url, depth=depth, outlinks=outlinks,
                    title=_page_title(dom, url), fetch_status=str(result.status)))
                if depth + 1 > config.max_depth:
                    continue
                for link in outlinks:
                    if link.target_url in seen:
                        continue
                    if registrable_host(link.target_url) not in site:
                        continue
                    seen.add(link.target_url)
                    frontier.append((link.target_url, depth + 1))
    return records
