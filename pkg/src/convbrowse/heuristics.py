"""Site-level heuristics: menu/offerings ranking and in-page lookup.

The offerings score is popularity times the weight of the target's modal
region. Popularity is either total occurrences (default — a link referenced
twice on one page counts twice) or distinct referencing pages. Scores are
exact rationals so that ranking is invariant under any positive rescaling of
the weight table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .page_model import PLACEHOLDER_RE, Segment, SegmentTree, iter_segments
from .site_model import LinkStats, NavigationGraph
from .urls import same_site

DEFAULT_REGION_WEIGHTS: dict[str, Fraction] = {
    "nav": Fraction("1.5"),
    "header": Fraction("1.2"),
    "main": Fraction(1),
    "other": Fraction(1),
    "aside": Fraction("0.8"),
    "footer": Fraction("0.5"),
}

POPULARITY_MODES = ("occurrences", "distinct_pages")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass
class OfferingsConfig:
    threshold: int = 30
    region_weights: dict[str, Fraction] = field(
        default_factory=lambda: dict(DEFAULT_REGION_WEIGHTS))
    popularity_mode: str = "occurrences"
    gap_cutoff: bool = False  # stop at the largest relative score drop

    def __post_init__(self) -> None:
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")
        self.region_weights = {k: _as_fraction(v) for k, v in self.region_weights.items()}
        if any(w <= 0 for w in self.region_weights.values()):
            raise ValueError("region weights must be > 0")
        if self.popularity_mode not in POPULARITY_MODES:
            raise ValueError(f"unknown popularity_mode {self.popularity_mode!r}")


@dataclass
class Offering:
    target_url: str
    label: str
    score: Fraction
    rank: int


@dataclass
class LookupMatch:
    segment_id: str
    kind: str  # "navigation" iff the match lies in an anchor text, else "reading"
    snippet: str
    target_url: str | None = None


@dataclass
class PrecisionRecall:
    precision: Fraction
    recall: Fraction
    empty_prediction: bool = False


def modal_region(stats: LinkStats, weights: dict[str, Fraction]) -> str:
    """Most frequent region among the target's occurrences; ties go to the
    higher-weighted region (favoring menu placement)."""
    best = None
    for region, count in stats.region_histogram.items():
        weight = weights.get(region, Fraction(1))
        key = (count, weight, region)
        if best is None or key > best[0]:
            best = (key, region)
    assert best is not None
    return best[1]


def rank_offerings(graph: NavigationGraph, stats: dict[str, LinkStats],
                   config: OfferingsConfig | None = None) -> list[Offering]:
    """Rank same-origin link targets by popularity x modal-region weight."""
    from .site_model import canonical_anchor

    if not graph.nodes:
        raise ValueError("cannot rank offerings of an empty graph")
    config = config or OfferingsConfig()
    scored: list[tuple[Fraction, int, str, str]] = []
    for target, entry in stats.items():
        if not same_site(target, graph.seed):
            continue
        if config.popularity_mode == "occurrences":
            pop = entry.popularity
        else:
            pop = entry.referencing_pages
        region = modal_region(entry, config.region_weights)
        weight = config.region_weights.get(region, Fraction(1))
        score = Fraction(pop) * weight
        scored.append((score, entry.min_dom_index, target, canonical_anchor(entry)))
    scored.sort(key=lambda item: (-item[0], item[1], item[2]))
    scored = scored[:config.threshold]
    if config.gap_cutoff and len(scored) > 1:
        drops = [
            (scored[i][0] - scored[i + 1][0]) / scored[i][0]
            for i in range(len(scored) - 1)
        ]
        cut = max(range(len(drops)), key=lambda i: (drops[i], -i)) + 1
        scored = scored[:cut]
    return [
        Offering(target_url=target, label=label, score=score, rank=i + 1)
        for i, (score, _, target, label) in enumerate(scored)
    ]


def evaluate_offerings(predicted: list[Offering] | Iterable[str],
                       truth: set[str]) -> PrecisionRecall:
    """Set precision/recall by normalized-URL membership, as exact rationals."""
    if not truth:
        raise ValueError("ground truth must be non-empty")
    urls = [p.target_url if isinstance(p, Offering) else p for p in predicted]
    predicted_set = set(urls)
    if not predicted_set:
        return PrecisionRecall(Fraction(0), Fraction(0), empty_prediction=True)
    hit = len(predicted_set & truth)
    return PrecisionRecall(
        precision=Fraction(hit, len(predicted_set)),
        recall=Fraction(hit, len(truth)),
    )


def _snippet(text: str, start: int, end: int, margin: int = 60) -> str:
    """Window around [start, end) clipped to word boundaries, within one line."""
    line_lo = text.rfind("\n", 0, start) + 1
    line_hi = text.find("\n", end)
    if line_hi < 0:
        line_hi = len(text)
    lo = max(line_lo, start - margin)
    hi = min(line_hi, end + margin)
    if lo > line_lo:
        space = text.rfind(" ", line_lo, lo + 1)
        lo = space + 1 if space > line_lo else lo
    if hi < line_hi:
        space = text.find(" ", hi, line_hi)
        hi = space if space >= 0 else line_hi
    # Snippets are read aloud; the link placeholders are markup, not content.
    snippet = PLACEHOLDER_RE.sub("", text[lo:hi])
    return re.sub(r"\s+", " ", snippet).strip()


def _anchor_spans(segment: Segment) -> list[tuple[int, int, str]]:
    """(start, end, target) span of each anchor's text within readable_text."""
    spans = []
    for match in PLACEHOLDER_RE.finditer(segment.readable_text):
        n = int(match.group(1))
        if not 1 <= n <= len(segment.links):
            continue
        link = segment.links[n - 1]
        end = match.start() - 1 if match.start() > 0 else match.start()
        start = max(0, end - len(link.anchor))
        spans.append((start, end, link.href))
    return spans


def lookup(tree: SegmentTree, query: str) -> list[LookupMatch]:
    """Case-insensitive substring scan over readable text and anchor texts.

    Matches inside an anchor's text are navigation matches carrying the
    link target; everything else is a reading match. Document order,
    deduplicated per (segment, kind, target).
    """
    if not query:
        raise ValueError("lookup query must be non-empty")
    needle = query.lower()
    matches: list[LookupMatch] = []
    seen: set[tuple[str, str, str | None]] = set()
    for segment in iter_segments(tree):
        text = segment.readable_text
        haystack = text.lower()
        spans = _anchor_spans(segment)
        pos = haystack.find(needle)
        while pos >= 0:
            end = pos + len(needle)
            target = None
            for span_start, span_end, href in spans:
                if pos >= span_start and end <= span_end:
                    target = href
                    break
            kind = "navigation" if target is not None else "reading"
            key = (segment.segment_id, kind, target)
            if key not in seen:
                seen.add(key)
                matches.append(LookupMatch(
                    segment_id=segment.segment_id, kind=kind,
                    snippet=_snippet(text, pos, end), target_url=target))
            pos = haystack.find(needle, end)
        # Anchors whose text matches but whose placeholder span was clipped
        # (e.g. anchor text split across lines) still count as navigation.
        for link in segment.links:
            if needle in link.anchor.lower():
                key = (segment.segment_id, "navigation", link.href)
                if key not in seen:
                    seen.add(key)
                    matches.append(LookupMatch(
                        segment_id=segment.segment_id, kind="navigation",
                        snippet=link.anchor, target_url=link.href))
    return matches
