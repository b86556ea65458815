"""Offline evaluation of the offerings heuristic on a fixture corpus.

Each corpus site is a directory of static pages served through the fixture
transport under a synthetic origin ``http://<site_id>.fixture.test``. Ground
truth is a hand-annotated set of menu links; matching is by normalized URL.
Precision/recall are exact rationals and the aggregate is the macro
(per-site) arithmetic mean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .crawler import CrawlConfig, crawl
from .fetch import Fetcher, FixtureTransport
from .heuristics import OfferingsConfig, evaluate_offerings, rank_offerings
from .site_model import build_graph
from .urls import normalize_url

FIXTURE_DOMAIN = "fixture.test"


class EvalError(Exception):
    pass


@dataclass
class SiteEntry:
    site_id: str
    root: Path
    seed_path: str
    truth_path: Path

    @property
    def origin(self) -> str:
        return f"http://{self.site_id}.{FIXTURE_DOMAIN}"

    @property
    def seed_url(self) -> str:
        return normalize_url(self.origin + self.seed_path)


@dataclass
class CorpusManifest:
    sites: list[SiteEntry]

    def __post_init__(self) -> None:
        ids = [s.site_id for s in self.sites]
        if len(set(ids)) != len(ids):
            raise EvalError("site ids in manifest must be unique")
        for site in self.sites:
            if not site.root.is_dir():
                raise EvalError(f"site root does not exist: {site.root}")


def load_manifest(path: str | Path) -> CorpusManifest:
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    sites = []
    for entry in data["sites"]:
        sites.append(SiteEntry(
            site_id=entry["id"],
            root=(path.parent / entry["root"]).resolve(),
            seed_path=entry["seed"],
            truth_path=(path.parent / entry["truth"]).resolve(),
        ))
    return CorpusManifest(sites=sites)


@dataclass
class SiteResult:
    site_id: str
    precision: Fraction
    recall: Fraction
    predicted_count: int
    truth_count: int
    skipped: bool = False
    note: str = ""


@dataclass
class EvalReport:
    per_site: list[SiteResult]
    aggregate_precision: Fraction
    aggregate_recall: Fraction
    threshold: int
    popularity_mode: str
    region_weights: dict[str, Fraction]

    def to_json(self) -> str:
        payload = {
            "config": {
                "threshold": self.threshold,
                "popularity_mode": self.popularity_mode,
                "region_weights": {k: str(v) for k, v in self.region_weights.items()},
                "averaging": "macro",
            },
            "per_site": [
                {
                    "site": r.site_id,
                    "precision": str(r.precision),
                    "recall": str(r.recall),
                    "predicted": r.predicted_count,
                    "truth": r.truth_count,
                    "skipped": r.skipped,
                    "note": r.note,
                }
                for r in self.per_site
            ],
            "aggregate": {
                "precision": str(self.aggregate_precision),
                "recall": str(self.aggregate_recall),
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_table(self) -> str:
        lines = [
            f"# offerings evaluation (macro-averaged, threshold={self.threshold}, "
            f"popularity={self.popularity_mode})",
            f"{'site':<12} {'precision':>12} {'recall':>12} {'pred':>5} {'truth':>5}",
        ]
        for r in self.per_site:
            if r.skipped:
                lines.append(f"{r.site_id:<12} skipped: {r.note}")
                continue
            lines.append(
                f"{r.site_id:<12} {f'{float(r.precision):.4f}':>12} "
                f"{f'{float(r.recall):.4f}':>12} {r.predicted_count:>5} {r.truth_count:>5}")
        lines.append(
            f"{'MACRO-AVG':<12} {f'{float(self.aggregate_precision):.4f}':>12} "
            f"{f'{float(self.aggregate_recall):.4f}':>12}")
        return "\n".join(lines)


def _load_truth(site: SiteEntry) -> set[str]:
    data = json.loads(site.truth_path.read_text(encoding="utf-8"))
    return {normalize_url(url) for url in data["menu_links"]}


def eval_site(site: SiteEntry, offerings_config: OfferingsConfig,
              crawl_config: CrawlConfig | None = None) -> SiteResult:
    host = f"{site.site_id}.{FIXTURE_DOMAIN}"
    fetcher = Fetcher(FixtureTransport({host: site.root}))
    config = crawl_config or CrawlConfig(seed=site.seed_url)
    config.seed = site.seed_url
    records = crawl(config, fetcher)
    graph = build_graph(records, config=config)
    from .site_model import compute_popularity

    stats = compute_popularity(graph)
    predicted = rank_offerings(graph, stats, offerings_config)
    truth = _load_truth(site)
    result = evaluate_offerings(predicted, truth)
    return SiteResult(
        site_id=site.site_id,
        precision=result.precision,
        recall=result.recall,
        predicted_count=len(predicted),
        truth_count=len(truth),
        note="empty prediction" if result.empty_prediction else "",
    )


def run_eval(manifest: CorpusManifest,
             offerings_config: OfferingsConfig | None = None,
             crawl_config: CrawlConfig | None = None) -> EvalReport:
    offerings_config = offerings_config or OfferingsConfig()
    per_site: list[SiteResult] = []
    for site in manifest.sites:
        if not site.truth_path.is_file():
            per_site.append(SiteResult(
                site_id=site.site_id, precision=Fraction(0), recall=Fraction(0),
                predicted_count=0, truth_count=0, skipped=True,
                note=f"missing ground truth {site.truth_path.name}"))
            continue
        cfg = None
        if crawl_config is not None:
            cfg = CrawlConfig(seed=site.seed_url, max_depth=crawl_config.max_depth,
                              max_pages=crawl_config.max_pages,
                              ttl_seconds=crawl_config.ttl_seconds,
                              worker_count=crawl_config.worker_count)
        per_site.append(eval_site(site, offerings_config, cfg))
    evaluated = [r for r in per_site if not r.skipped]
    if not evaluated:
        raise EvalError("every site in the corpus was skipped")
    n = len(evaluated)
    return EvalReport(
        per_site=per_site,
        aggregate_precision=sum((r.precision for r in evaluated), Fraction(0)) / n,
        aggregate_recall=sum((r.recall for r in evaluated), Fraction(0)) / n,
        threshold=offerings_config.threshold,
        popularity_mode=offerings_config.popularity_mode,
        region_weights=dict(offerings_config.region_weights),
    )


def sweep_threshold(manifest: CorpusManifest, thresholds: list[int],
                    offerings_config: OfferingsConfig | None = None,
                    crawl_config: CrawlConfig | None = None,
                    ) -> list[tuple[int, Fraction, Fraction]]:
    """One run_eval per threshold: (threshold, aggregate P, aggregate R) rows."""
    if not thresholds:
        raise EvalError("threshold list must be non-empty")
    base = offerings_config or OfferingsConfig()
    rows = []
    for threshold in thresholds:
        config = OfferingsConfig(
            threshold=threshold, region_weights=dict(base.region_weights),
            popularity_mode=base.popularity_mode, gap_cutoff=base.gap_cutoff)
        report = run_eval(manifest, config, crawl_config)
        rows.append((threshold, report.aggregate_precision, report.aggregate_recall))
    return rows
