"""Non-visual page representation: a tree of meaningful segments.

Segmentation leverages landmark/sectioning markup (header, nav, main, footer,
aside, article, section, form, plus explicit ARIA roles, which win over
tags). Content outside any landmark is gathered into one generic segment per
contiguous run. Each segment carries reading-friendly text in which inline
links are kept in place and tagged with " [link N]" placeholders, offered
separately in the links list.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterator

from .dom import Node, find_by_id, parse_html
from .fetch import PageSource
from .urls import NormalizationError, normalize_url

ROLES = ("banner", "navigation", "main", "contentinfo", "complementary",
         "article", "section", "form", "generic")

_ROLE_ATTR = {
    "banner": "banner",
    "navigation": "navigation",
    "main": "main",
    "contentinfo": "contentinfo",
    "complementary": "complementary",
    "article": "article",
    "region": "section",
    "form": "form",
}
_TAG_ROLE = {
    "header": "banner",
    "nav": "navigation",
    "main": "main",
    "footer": "contentinfo",
    "aside": "complementary",
    "article": "article",
    "section": "section",
    "form": "form",
}

_BLOCK_TAGS = {
    "address", "article", "aside", "blockquote", "div", "dl", "dd", "dt",
    "fieldset", "figure", "figcaption", "footer", "form", "h1", "h2", "h3",
    "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre",
    "section", "table", "tbody", "td", "th", "thead", "tr", "ul",
}
_DROP_TAGS = {"script", "style", "template", "noscript"}
_SKIP_SCHEMES = ("mailto:", "javascript:", "tel:", "data:")
_HEADING_TAGS = ("h1", "h2", "h3", "h4", "h5", "h6")

PLACEHOLDER_RE = re.compile(r"\[link (\d+)\]")


@dataclass
class SegmentLink:
    n: int  # 1-based placeholder ordinal within the segment
    href: str
    anchor: str


@dataclass
class Segment:
    segment_id: str
    role: str
    label: str = ""
    readable_text: str = ""
    links: list[SegmentLink] = field(default_factory=list)
    children: list["Segment"] = field(default_factory=list)


@dataclass
class PageMetadata:
    title: str = ""
    description: str = ""
    language: str = ""
    authors: list[str] = field(default_factory=list)
    last_modified: str = ""


@dataclass
class SegmentTree:
    url: str
    root: Segment
    metadata: PageMetadata = field(default_factory=PageMetadata)


class NothingToSummarize(Exception):
    pass


@dataclass
class SummaryResult:
    text: str
    status: str  # "ok" or "empty"


def _segment_role(element: Node) -> str | None:
    role = element.get("role").strip().lower()
    if role:
        return _ROLE_ATTR.get(role)
    return _TAG_ROLE.get(element.tag)


def _has_segment_descendant(element: Node) -> bool:
    return any(_segment_role(el) is not None for el in element.iter_elements())


def _segment_id(role: str, label: str, path: tuple[int, ...]) -> str:
    raw = f"{role}|{label}|{'/'.join(map(str, path))}"
    return hashlib.sha1(raw.encode("utf-8")).hexdigest()[:12]


def _resolve_href(href: str, base_url: str | None) -> str | None:
    href = href.strip()
    if not href or href.startswith("#") or href.lower().startswith(_SKIP_SCHEMES):
        return None
    if base_url is None:
        return href
    try:
        return normalize_url(href, base=base_url)
    except NormalizationError:
        return None


def _anchor_visible_text(anchor: Node) -> str:
    text = anchor.text()
    if text:
        return text
    images = [c for c in anchor.children if isinstance(c, Node) and c.tag == "img"]
    if len(images) == 1:
        return images[0].get("alt").strip()
    return ""


def _readable(items: list[Node | str], base_url: str | None) -> tuple[str, list[SegmentLink]]:
    """Reading-friendly text plus the per-segment link list."""
    tokens: list[str] = []
    links: list[SegmentLink] = []

    def walk(children: list[Node | str]) -> None:
        for child in children:
            if isinstance(child, str):
                tokens.append(child)
                continue
            if child.tag in _DROP_TAGS:
                continue
            if child.tag == "br":
                tokens.append("\n")
                continue
            if child.tag == "a":
                href = _resolve_href(child.get("href"), base_url)
                text = _anchor_visible_text(child)
                if href is None:
                    tokens.append(f" {text} ")
                else:
                    n = len(links) + 1
                    links.append(SegmentLink(n=n, href=href, anchor=text))
                    tokens.append(f" {text} [link {n}] ")
                continue
            block = child.tag in _BLOCK_TAGS
            if block:
                tokens.append("\n")
            walk(child.children)
            if block:
                tokens.append("\n")

    walk(items)
    lines = []
    for line in "".join(tokens).split("\n"):
        cleaned = re.sub(r"\s+", " ", line).strip()
        if cleaned:
            lines.append(cleaned)
    return "\n".join(lines), links


def extract_readable_text(raw: str, base_url: str | None = None) -> tuple[str, list[SegmentLink]]:
    """Clean one HTML fragment: block boundaries become single newlines,
    whitespace collapses, inline links get " [link N]" placeholders."""
    dom = parse_html(raw)
    return _readable(list(dom.children), base_url)


def _label_for(element: Node, dom_root: Node) -> str:
    label = element.get("aria-label").strip()
    if label:
        return re.sub(r"\s+", " ", label)
    labelledby = element.get("aria-labelledby").strip()
    if labelledby:
        parts = []
        for ref in labelledby.split():
            target = find_by_id(dom_root, ref)
            if target is not None:
                parts.append(target.text())
        if parts:
            return " ".join(p for p in parts if p)
    for el in element.iter_elements():
        if el.tag in _HEADING_TAGS and el.text():
            return el.text()
    return ""


def segment_page(source: PageSource) -> SegmentTree:
    """Segment one page; worst case is a single generic child holding everything."""
    dom = parse_html(source.body)
    body = dom.find("body") or dom
    root = Segment(segment_id=_segment_id("generic", "", ()), role="generic")
    _collect(list(body.children), root, (), dom, source.url)
    metadata = extract_metadata(source)
    return SegmentTree(url=source.url, root=root, metadata=metadata)


def _collect(items: list[Node | str], parent: Segment, path: tuple[int, ...],
             dom_root: Node, base_url: str | None) -> None:
    """Children of ``parent``: segment elements become child segments; runs of
    other content become one generic segment per contiguous run."""
    run: list[Node | str] = []

    def flush_run() -> None:
        if not run:
            return
        text, links = _readable(run, base_url)
        if text or links:
            child_path = path + (len(parent.children),)
            parent.children.append(Segment(
                segment_id=_segment_id("generic", "", child_path),
                role="generic", readable_text=text, links=links))
        run.clear()

    def scan(children: list[Node | str]) -> None:
        for child in children:
            if isinstance(child, str):
                run.append(child)
                continue
            if child.tag in _DROP_TAGS:
                continue
            role = _segment_role(child)
            if role is not None:
                flush_run()
                _build_segment(child, role, parent, path, dom_root, base_url)
            elif _has_segment_descendant(child):
                scan(child.children)
            else:
                run.append(child)

    scan(items)
    flush_run()


def _build_segment(element: Node, role: str, parent: Segment, path: tuple[int, ...],
                   dom_root: Node, base_url: str | None) -> None:
    child_path = path + (len(parent.children),)
    label = _label_for(element, dom_root)
    segment = Segment(segment_id=_segment_id(role, label, child_path),
                      role=role, label=label)
    parent.children.append(segment)

    own: list[Node | str] = []

    def scan(children: list[Node | str]) -> None:
        for child in children:
            if isinstance(child, str):
                own.append(child)
                continue
            if child.tag in _DROP_TAGS:
                continue
            nested_role = _segment_role(child)
            if nested_role is not None:
                _flush()
                _build_segment(child, nested_role, segment, child_path, dom_root, base_url)
            elif _has_segment_descendant(child):
                scan(child.children)
            else:
                own.append(child)

    collected: list[tuple[str, list[SegmentLink]]] = []

    def _flush() -> None:
        if own:
            collected.append(_readable(list(own), base_url))
            own.clear()

    scan(element.children)
    _flush()
    # Merge own-content pieces (re-number links across pieces).
    texts: list[str] = []
    links: list[SegmentLink] = []
    for text, piece_links in collected:
        offset = len(links)
        if offset:
            def renumber(match: re.Match, _offset: int = offset) -> str:
                return f"[link {int(match.group(1)) + _offset}]"
            text = PLACEHOLDER_RE.sub(renumber, text)
        for link in piece_links:
            links.append(SegmentLink(n=link.n + offset, href=link.href, anchor=link.anchor))
        if text:
            texts.append(text)
    segment.readable_text = "\n".join(texts)
    segment.links = links


def extract_metadata(source: PageSource) -> PageMetadata:
    dom = parse_html(source.body)
    meta = PageMetadata()

    title = dom.find("title")
    if title is not None and title.text():
        meta.title = title.text()
    else:
        h1 = dom.find("h1")
        meta.title = h1.text() if h1 is not None and h1.text() else source.url

    html = dom.find("html")
    if html is not None:
        lang = html.get("lang").strip()
        if lang:
            meta.language = lang.split("-")[0].lower()

    authors: list[str] = []
    seen_authors: set[str] = set()

    def add_author(name: str) -> None:
        name = re.sub(r"\s+", " ", name).strip()
        if name and name.lower() not in seen_authors:
            seen_authors.add(name.lower())
            authors.append(name)

    for el in dom.iter_elements():
        if el.tag == "meta":
            name = el.get("name").strip().lower()
            http_equiv = el.get("http-equiv").strip().lower()
            content = el.get("content").strip()
            if name == "description" and not meta.description:
                meta.description = re.sub(r"\s+", " ", content)
            elif name == "author":
                add_author(content)
            elif name == "last-modified" or http_equiv == "last-modified":
                if not meta.last_modified:
                    meta.last_modified = content
        else:
            classes = el.get("class").lower()
            rel = el.get("rel").lower()
            if "author" in rel or "author" in classes.split() or "byline" in classes.split():
                add_author(el.text())
    meta.authors = authors
    return meta


def iter_segments(tree: SegmentTree) -> Iterator[Segment]:
    """All segments in document order (pre-order), root included."""

    def walk(segment: Segment) -> Iterator[Segment]:
        yield segment
        for child in segment.children:
            yield from walk(child)

    return walk(tree.root)


def find_segment(tree: SegmentTree, segment_id: str) -> Segment | None:
    for segment in iter_segments(tree):
        if segment.segment_id == segment_id:
            return segment
    return None


def main_segment(tree: SegmentTree) -> Segment | None:
    """The reading anchor: the main landmark, else the first article, else the
    segment with the most text."""
    for segment in iter_segments(tree):
        if segment.role == "main":
            return segment
    for segment in iter_segments(tree):
        if segment.role == "article":
            return segment
    best = None
    for segment in iter_segments(tree):
        if best is None or len(segment.readable_text) > len(best.readable_text):
            best = segment
    return best


def subtree_text(segment: Segment) -> str:
    """Readable text of a segment and its descendants, document order."""
    parts = []

    def walk(seg: Segment) -> None:
        if seg.readable_text:
            parts.append(seg.readable_text)
        for child in seg.children:
            walk(child)

    walk(segment)
    return "\n".join(parts)


def split_sentences(text: str) -> list[str]:
    """Approximate splitter: terminal punctuation followed by whitespace."""
    flat = re.sub(r"\s+", " ", text).strip()
    if not flat:
        return []
    return [s for s in re.split(r"(?<=[.!?])\s+", flat) if s]


def summarize(tree: SegmentTree, max_sentences: int) -> SummaryResult:
    """Extractive fallback: first sentences of the main segment's text.

    An alternative summarizer can be registered behind the same contract via
    ``set_summarizer``.
    """
    if max_sentences < 1:
        raise ValueError("max_sentences must be >= 1")
    return _summarizer(tree, max_sentences)


def _extractive_summarizer(tree: SegmentTree, max_sentences: int) -> SummaryResult:
    main = main_segment(tree)
    text = subtree_text(main) if main is not None else ""
    sentences = split_sentences(text)
    if not sentences:
        return SummaryResult(text="", status="empty")
    return SummaryResult(text=" ".join(sentences[:max_sentences]), status="ok")


_summarizer = _extractive_summarizer


def set_summarizer(fn) -> None:
    """Swap in a different summarizer with the same (tree, max_sentences) contract."""
    global _summarizer
    _summarizer = fn


def tree_to_json(tree: SegmentTree) -> dict:
    def seg(segment: Segment) -> dict:
        return {
            "segment_id": segment.segment_id,
            "role": segment.role,
            "label": segment.label,
            "text": segment.readable_text,
            "links": [{"n": l.n, "href": l.href, "anchor": l.anchor} for l in segment.links],
            "children": [seg(c) for c in segment.children],
        }

    return {
        "url": tree.url,
        "metadata": {
            "title": tree.metadata.title,
            "description": tree.metadata.description,
            "language": tree.metadata.language,
            "authors": tree.metadata.authors,
            "last_modified": tree.metadata.last_modified,
        },
        "root": seg(tree.root),
    }
