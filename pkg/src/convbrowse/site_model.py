"""Navigation graph and site-level link statistics (popularity)."""

from __future__ import annotations

import re
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .crawler import CrawlConfig, CrawlRecord, LinkOccurrence

GRAPH_HEADER = "#convbrowse-graph v1"


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class NodeInfo:
    title: str
    depth: int


@dataclass
class NavigationGraph:
    """Immutable after build; safe to share across sessions by reference."""

    seed: str
    nodes: dict[str, NodeInfo]
    edges: list[LinkOccurrence]
    crawl_config: CrawlConfig | None = None
    crawl_timestamp: float = field(default_factory=time.time)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass
class LinkStats:
    target_url: str
    popularity: int = 0
    referencing_pages: int = 0
    region_histogram: Counter = field(default_factory=Counter)
    min_dom_index: int = 0
    anchor_texts: Counter = field(default_factory=Counter)


def build_graph(records: list[CrawlRecord], config: CrawlConfig | None = None,
                timestamp: float | None = None) -> NavigationGraph:
    """Exactly the visited nodes plus every recorded occurrence."""
    if not records:
        raise GraphError("cannot build a graph from zero crawl records")
    nodes: dict[str, NodeInfo] = {}
    edges: list[LinkOccurrence] = []
    for record in records:
        if record.url in nodes:
            raise GraphError(f"duplicate URL in crawl records: {record.url}")
        nodes[record.url] = NodeInfo(title=record.title, depth=record.depth)
        edges.extend(record.outlinks)
    return NavigationGraph(
        seed=records[0].url,
        nodes=nodes,
        edges=edges,
        crawl_config=config,
        crawl_timestamp=timestamp if timestamp is not None else time.time(),
    )


def compute_popularity(graph: NavigationGraph) -> dict[str, LinkStats]:
    """Per-target occurrence counts; pure function of the graph."""
    stats: dict[str, LinkStats] = {}
    sources: dict[str, set[str]] = {}
    for edge in graph.edges:
        entry = stats.get(edge.target_url)
        if entry is None:
            entry = LinkStats(target_url=edge.target_url, min_dom_index=edge.dom_index)
            stats[edge.target_url] = entry
            sources[edge.target_url] = set()
        entry.popularity += 1
        entry.region_histogram[edge.region] += 1
        entry.min_dom_index = min(entry.min_dom_index, edge.dom_index)
        entry.anchor_texts[edge.anchor_text] += 1
        sources[edge.target_url].add(edge.source_url)
    for target, entry in stats.items():
        entry.referencing_pages = len(sources[target])
    return stats


def canonical_anchor(stats: LinkStats) -> str:
    """Most frequent non-empty anchor text; ties by shortest, then lexicographic."""
    candidates = [(text, count) for text, count in stats.anchor_texts.items() if text]
    if candidates:
        candidates.sort(key=lambda item: (-item[1], len(item[0]), item[0]))
        return candidates[0][0]
    segment = stats.target_url.rstrip("/").rsplit("/", 1)[-1]
    segment = re.sub(r"\.[a-zA-Z0-9]+$", "", segment)
    return re.sub(r"[-_]+", " ", segment).strip() or stats.target_url


# ---------------------------------------------------------------------------
# Graph file format: versioned, line-oriented, tab-separated; lossless.
# ---------------------------------------------------------------------------

def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(value: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def save_graph(graph: NavigationGraph, path: str | Path) -> None:
    lines = [GRAPH_HEADER, f"SEED\t{_escape(graph.seed)}", f"TS\t{graph.crawl_timestamp!r}"]
    if graph.crawl_config is not None:
        cfg = graph.crawl_config
        lines.append(
            "CONFIG\t"
            f"seed={_escape(cfg.seed)}\tmax_depth={cfg.max_depth}\t"
            f"max_pages={cfg.max_pages}\tttl_seconds={cfg.ttl_seconds}\t"
            f"worker_count={cfg.worker_count}")
    for url, info in graph.nodes.items():
        lines.append(f"NODE\t{_escape(url)}\t{info.depth}\t{_escape(info.title)}")
    for e in graph.edges:
        lines.append(
            f"EDGE\t{_escape(e.source_url)}\t{_escape(e.target_url)}\t"
            f"{e.dom_index}\t{e.region}\t{_escape(e.anchor_text)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> NavigationGraph:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != GRAPH_HEADER:
        raise GraphError(f"{path}: not a convbrowse graph file")
    seed = ""
    timestamp = 0.0
    config: CrawlConfig | None = None
    nodes: dict[str, NodeInfo] = {}
    edges: list[LinkOccurrence] = []
    for line in lines[1:]:
        if not line:
            continue
        kind, _, rest = line.partition("\t")
        fields = rest.split("\t")
        if kind == "SEED":
            seed = _unescape(fields[0])
        elif kind == "TS":
            timestamp = float(fields[0])
        elif kind == "CONFIG":
            kv = dict(item.split("=", 1) for item in fields)
            config = CrawlConfig(
                seed=_unescape(kv["seed"]), max_depth=int(kv["max_depth"]),
                max_pages=int(kv["max_pages"]), ttl_seconds=int(kv["ttl_seconds"]),
                worker_count=int(kv["worker_count"]))
        elif kind == "NODE":
            url, depth, title = fields[0], fields[1], fields[2]
            nodes[_unescape(url)] = NodeInfo(title=_unescape(title), depth=int(depth))
        elif kind == "EDGE":
            src, tgt, dom_index, region, anchor = fields
            edges.append(LinkOccurrence(
                source_url=_unescape(src), target_url=_unescape(tgt),
                dom_index=int(dom_index), region=region,
                anchor_text=_unescape(anchor)))
        else:
            raise GraphError(f"{path}: unknown record kind {kind!r}")
    return NavigationGraph(seed=seed, nodes=nodes, edges=edges,
                           crawl_config=config, crawl_timestamp=timestamp)
