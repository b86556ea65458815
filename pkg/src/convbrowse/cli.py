"""Command-line surfaces: crawl, eval, repl, serve, grammar.

Exit codes: 0 ok, 1 runtime failure, 2 usage error (argparse default).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .crawler import CrawlConfig, crawl
from .dialog import DialogEngine, SessionError
from .eval_harness import EvalError, load_manifest, run_eval, sweep_threshold
from .fetch import (CachedFetcher, FetchConfig, Fetcher, FixtureTransport,
                    HttpTransport)
from .heuristics import DEFAULT_REGION_WEIGHTS, OfferingsConfig
from .nlu import grammar_dump
from .site_model import build_graph, save_graph


def load_weights_file(path: str | Path) -> dict[str, Fraction]:
    """key=value lines; unknown regions are allowed, comments start with #."""
    weights = dict(DEFAULT_REGION_WEIGHTS)
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        weights[key.strip()] = Fraction(value.strip())
    return weights


def _parse_fixture_flags(pairs: list[str]) -> dict[str, str]:
    roots = {}
    for pair in pairs:
        host, sep, root = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(
                f"--fixture expects host=dir, got {pair!r}")
        roots[host] = root
    return roots


def build_fetcher(args) -> Fetcher | CachedFetcher:
    if getattr(args, "fixture", None):
        transport = FixtureTransport(_parse_fixture_flags(args.fixture))
        return Fetcher(transport)
    fetcher = Fetcher(HttpTransport(), FetchConfig())
    ttl = int(getattr(args, "ttl_hours", 24) * 3600)
    return CachedFetcher(fetcher, cache_dir=getattr(args, "cache_dir", None),
                         ttl_seconds=ttl)


def _offerings_config(args) -> OfferingsConfig:
    weights = (load_weights_file(args.weights) if getattr(args, "weights", None)
               else dict(DEFAULT_REGION_WEIGHTS))
    return OfferingsConfig(
        threshold=getattr(args, "threshold", 30),
        region_weights=weights,
        popularity_mode=getattr(args, "popularity_mode", "occurrences"),
    )


def _build_engine(args) -> DialogEngine:
    return DialogEngine(
        fetcher=build_fetcher(args),
        max_depth=args.depth,
        max_pages=args.max_pages,
        worker_count=getattr(args, "workers", 4),
        offerings_config=_offerings_config(args),
    )


def cmd_crawl(args) -> int:
    fetcher = build_fetcher(args)
    config = CrawlConfig(seed=args.seed, max_depth=args.depth,
                         max_pages=args.max_pages, worker_count=args.workers,
                         ttl_seconds=int(args.ttl_hours * 3600))
    records = crawl(config, fetcher)
    graph = build_graph(records, config=config)
    save_graph(graph, args.out)
    print(f"crawled {graph.node_count} pages, {graph.edge_count} link occurrences "
          f"-> {args.out}")
    return 0


def cmd_eval(args) -> int:
    manifest = load_manifest(args.manifest)
    config = _offerings_config(args)
    crawl_cfg = CrawlConfig(seed="http://placeholder.fixture.test/",
                            max_depth=args.depth, max_pages=args.max_pages)
    if args.sweep:
        thresholds = [int(t) for t in args.sweep.split(",")]
        rows = sweep_threshold(manifest, thresholds, config, crawl_cfg)
        print(f"{'threshold':>9} {'precision':>12} {'recall':>12}")
        for threshold, precision, recall in rows:
            print(f"{threshold:>9} {float(precision):>12.4f} {float(recall):>12.4f}")
        return 0
    report = run_eval(manifest, config, crawl_cfg)
    if args.json:
        print(report.to_json())
    else:
        print(report.to_table())
    return 0


def cmd_repl(args) -> int:
    engine = _build_engine(args)
    try:
        session = engine.open_session(args.seed)
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = sys.stdout
    print(f"A: Connected to {session.current_title}. "
          'Ask away, or type "quit" to leave.', file=out)
    if args.script:
        lines = Path(args.script).read_text(encoding="utf-8").splitlines()
        source = iter(lines)
    else:
        source = None
    while True:
        if source is not None:
            utterance = next(source, None)
            if utterance is None:
                break
            utterance = utterance.strip()
            if not utterance or utterance.startswith("#"):
                continue
            print(f"U: {utterance}", file=out)
        else:
            try:
                utterance = input("U: ").strip()
            except EOFError:
                break
            if not utterance:
                continue
        if utterance.lower() in ("quit", "exit"):
            break
        response = session.handle(utterance)
        print(f"A: {response.text}", file=out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    engine = _build_engine(args)
    app = create_app(engine, session_timeout_s=args.session_timeout_min * 60)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_grammar(args) -> int:
    print(grammar_dump())
    return 0


def _add_crawl_flags(parser, with_workers: bool = True) -> None:
    parser.add_argument("--depth", type=int, default=3, help="max crawl depth")
    parser.add_argument("--max-pages", type=int, default=100, dest="max_pages")
    if with_workers:
        parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--cache-dir", dest="cache_dir", default=None)
    parser.add_argument("--ttl-hours", dest="ttl_hours", type=float, default=24.0)
    parser.add_argument("--fixture", action="append", default=[],
                        metavar="HOST=DIR",
                        help="serve HOST from local DIR instead of the network")


def _add_offerings_flags(parser) -> None:
    parser.add_argument("--threshold", type=int, default=30)
    parser.add_argument("--weights", default=None,
                        help="region weight file (key=value lines)")
    parser.add_argument("--popularity-mode", dest="popularity_mode",
                        choices=["occurrences", "distinct_pages"],
                        default="occurrences")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convbrowse",
        description="Conversational browsing: crawl, evaluate, chat.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_crawl = sub.add_parser("crawl", help="crawl a site into a graph file")
    p_crawl.add_argument("seed")
    _add_crawl_flags(p_crawl)
    p_crawl.add_argument("--out", required=True, help="graph file to write")
    p_crawl.set_defaults(fn=cmd_crawl)

    p_eval = sub.add_parser("eval", help="evaluate the offerings heuristic on a corpus")
    p_eval.add_argument("manifest")
    _add_offerings_flags(p_eval)
    p_eval.add_argument("--depth", type=int, default=3)
    p_eval.add_argument("--max-pages", type=int, default=100, dest="max_pages")
    p_eval.add_argument("--sweep", default=None,
                        help="comma-separated thresholds, e.g. 5,10,20,30")
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(fn=cmd_eval)

    p_repl = sub.add_parser("repl", help="interactive conversational browsing")
    p_repl.add_argument("seed")
    _add_crawl_flags(p_repl)
    _add_offerings_flags(p_repl)
    p_repl.add_argument("--script", default=None,
                        help="replay a transcript of utterances (golden tests)")
    p_repl.set_defaults(fn=cmd_repl)

    p_serve = sub.add_parser("serve", help="run the HTTP session API")
    _add_crawl_flags(p_serve)
    _add_offerings_flags(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--session-timeout-min", dest="session_timeout_min",
                         type=float, default=30.0)
    p_serve.set_defaults(fn=cmd_serve)

    p_grammar = sub.add_parser("grammar", help="print the intent grammar")
    p_grammar.set_defaults(fn=cmd_grammar)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (EvalError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
