"""Stateful browsing session: executes intents against the site model.

One session is strictly sequential; callers must serialize handle() calls on
the same session (the HTTP service does this with a per-session lock).
Distinct sessions share the immutable NavigationGraph freely.
"""

from __future__ import annotations

import logging
import re
import uuid
from dataclasses import dataclass, field

from . import heuristics, page_model
from .crawler import CrawlConfig, CrawlError, crawl
from .fetch import FetchError, Fetcher
from .nlu import Intent, parse_utterance
from .site_model import NavigationGraph, LinkStats, build_graph, compute_popularity
from .urls import NormalizationError, normalize_url, registrable_host

log = logging.getLogger(__name__)

SHORT_TEXT_LIMIT = 240
SHORT_LIST_LIMIT = 5
NORMAL_LIST_LIMIT = 8

_ORDINAL_WORDS = {
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
}
_ARTICLES = {"the", "a", "an"}

_LANGUAGE_CODES = {
    "english": "en", "french": "fr", "german": "de", "italian": "it",
    "spanish": "es", "portuguese": "pt", "dutch": "nl", "russian": "ru",
    "chinese": "zh", "japanese": "ja", "arabic": "ar",
}

_SPOKEN_ROLE = {
    "banner": "header",
    "navigation": "navigation",
    "main": "main content",
    "contentinfo": "footer",
    "complementary": "sidebar",
    "article": "article",
    "section": "section",
    "form": "form",
    "generic": "content",
}

CAPABILITIES = (
    'You can ask "what can I do in this website", "where am I", '
    '"lookup <word>", "go to <page>", "read article", "summarize", '
    'or "open <number>" after a list.'
)


class SessionError(Exception):
    pass


@dataclass
class Preferences:
    verbosity: str = "normal"  # "short" | "normal"
    speech_rate: int = 3  # 1..5, metadata only — no audio synthesis here

    def __post_init__(self) -> None:
        if self.verbosity not in ("short", "normal"):
            raise ValueError(f"bad verbosity {self.verbosity!r}")
        if not 1 <= self.speech_rate <= 5:
            raise ValueError("speech_rate must be within 1..5")


@dataclass
class Response:
    text: str
    kind: str
    items: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class Session:
    session_id: str
    engine: "DialogEngine"
    seed: str
    graph: NavigationGraph
    stats: dict[str, LinkStats]
    offerings: list[heuristics.Offering]
    current_url: str
    current_tree: page_model.SegmentTree
    nav_history: list[str] = field(default_factory=list)
    conversation_history: list[tuple[str, Intent, str]] = field(default_factory=list)
    reading_cursor: tuple[str, int] | None = None
    reading_sentences: list[str] = field(default_factory=list)
    bookmarks: list[tuple[str, str]] = field(default_factory=list)
    prefs: Preferences = field(default_factory=Preferences)
    # Most recent enumerated list; ordinal follow-ups resolve against it.
    active_list: list[tuple[str, str | None]] = field(default_factory=list)
    shown_upto: int = 0
    last_opened_ordinal: int = 0

    @property
    def current_title(self) -> str:
        title = self.current_tree.metadata.title
        if title:
            return title
        info = self.graph.nodes.get(self.current_url)
        return info.title if info and info.title else self.current_url

    def title_of(self, url: str) -> str:
        if url == self.current_url:
            return self.current_title
        info = self.graph.nodes.get(url)
        return info.title if info and info.title else url

    def navigate_to(self, url: str) -> Response:
        """Fetch + segment a page and push it onto the navigation history."""
        return self.engine._goto(self, url)

    def handle(self, utterance: str) -> Response:
        return self.engine.handle(self, utterance)


class DialogEngine:
    def __init__(self, fetcher: Fetcher, max_depth: int = 3, max_pages: int = 100,
                 worker_count: int = 4, ttl_seconds: int = 24 * 3600,
                 offerings_config: heuristics.OfferingsConfig | None = None):
        self.fetcher = fetcher
        self.max_depth = max_depth
        self.max_pages = max_pages
        self.worker_count = worker_count
        self.ttl_seconds = ttl_seconds
        self.offerings_config = offerings_config or heuristics.OfferingsConfig()

    # -- session lifecycle ---------------------------------------------------

    def _crawl_site(self, seed: str) -> NavigationGraph:
        config = CrawlConfig(seed=seed, max_depth=self.max_depth,
                             max_pages=self.max_pages, ttl_seconds=self.ttl_seconds,
                             worker_count=self.worker_count)
        records = crawl(config, self.fetcher)
        return build_graph(records, config=config)

    def open_session(self, seed: str, graph: NavigationGraph | None = None) -> Session:
        try:
            seed = normalize_url(seed)
        except NormalizationError as exc:
            raise SessionError(str(exc)) from exc
        try:
            if graph is None:
                graph = self._crawl_site(seed)
            source = self.fetcher.fetch(seed, allowed_hosts={registrable_host(seed)})
        except (CrawlError, FetchError) as exc:
            raise SessionError(f"could not open {seed}: {exc}") from exc
        stats = compute_popularity(graph)
        offerings = heuristics.rank_offerings(graph, stats, self.offerings_config)
        return Session(
            session_id=uuid.uuid4().hex,
            engine=self,
            seed=seed,
            graph=graph,
            stats=stats,
            offerings=offerings,
            current_url=seed,
            current_tree=page_model.segment_page(source),
            nav_history=[seed],
        )

    # -- dispatch --------------------------------------------------------------

    def handle(self, session: Session, utterance: str) -> Response:
        intent = parse_utterance(utterance)
        try:
            response = self._dispatch(session, intent)
        except Exception:  # session must survive internal failures
            log.exception("intent %s failed on %s", intent.kind, session.current_url)
            response = self._respond(
                session, intent.kind,
                "Sorry, something went wrong handling that. The session is still alive.")
        session.conversation_history.append((utterance, intent, response.text[:80]))
        return response

    def _dispatch(self, session: Session, intent: Intent) -> Response:
        kind = intent.kind
        if kind == "Outline":
            return self.do_outline(session)
        if kind == "Orientation":
            return self.do_orientation(session)
        if kind == "Navigate":
            return self.do_navigate(session, intent.slots["target"])
        if kind == "Lookup":
            return self.do_lookup(session, intent.slots["query"])
        if kind == "ReadStart":
            return self.do_read(session, "start")
        if kind == "ReadNext":
            return self.do_read(session, "next")
        if kind == "ReadStop":
            return self.do_read(session, "stop")
        if kind in ("Overview", "About", "Summary", "YesNoMeta"):
            return self.do_metadata(session, intent)
        if kind in ("Open", "Bookmark", "SetSpeech", "SetVerbosity"):
            return self.do_ops(session, intent)
        if kind == "Help":
            return self._respond(session, "Help", CAPABILITIES)
        return self._respond(
            session, "Unrecognized",
            "I didn't understand that. " + CAPABILITIES)

    # -- rendering -------------------------------------------------------------

    def _respond(self, session: Session, kind: str, text: str,
                 items: list[tuple[int, str]] | None = None) -> Response:
        items = items or []
        if session.prefs.verbosity == "short":
            items = items[:SHORT_LIST_LIMIT]
            if len(text) > SHORT_TEXT_LIMIT:
                cut = text.rfind(" ", 0, SHORT_TEXT_LIMIT - 3)
                if cut <= 0:
                    cut = SHORT_TEXT_LIMIT - 3
                text = text[:cut].rstrip() + "..."
        return Response(text=text, kind=kind, items=items)

    def _list_limit(self, session: Session) -> int:
        return SHORT_LIST_LIMIT if session.prefs.verbosity == "short" else NORMAL_LIST_LIMIT

    def _enumerate(self, items: list[tuple[int, str]]) -> str:
        return " ".join(f"{n}. {label}." for n, label in items)

    # -- intents ---------------------------------------------------------------

    def do_outline(self, session: Session) -> Response:
        session.active_list = [(o.label, o.target_url) for o in session.offerings]
        session.last_opened_ordinal = 0
        limit = self._list_limit(session)
        session.shown_upto = min(limit, len(session.active_list))
        shown = [(i + 1, label) for i, (label, _) in
                 enumerate(session.active_list[:limit])]
        more = ""
        if len(session.active_list) > limit:
            more = f' Say "more" for the other {len(session.active_list) - limit}.'
        text = (f"This site offers: {self._enumerate(shown)}"
                f' Say "open" and a number to go there.{more}')
        return self._respond(session, "Outline", text, items=shown)

    def do_orientation(self, session: Session) -> Response:
        trail = [session.title_of(url) for url in reversed(session.nav_history[:-1])]
        text = f"You are at {session.current_title}"
        if trail:
            text += f", after {trail[0]}"
        if len(trail) > 1:
            text += f", from {trail[1]}"
        return self._respond(session, "Orientation", text + ".")

    # -- navigation --------------------------------------------------------------

    def _goto(self, session: Session, url: str, kind: str = "Navigate") -> Response:
        source = self.fetcher.fetch(
            url, allowed_hosts={registrable_host(session.seed)})
        tree = page_model.segment_page(source)
        session.nav_history.append(url)
        session.current_url = url
        session.current_tree = tree
        session.reading_cursor = None
        session.reading_sentences = []
        text = (f"Opened {session.current_title}. "
                f"Sections: {', '.join(self._section_names(session))}.")
        return self._respond(session, kind, text)

    @staticmethod
    def _section_names(session: Session) -> list[str]:
        children = session.current_tree.root.children
        if not children:
            return ["empty page"]
        return [seg.label or _SPOKEN_ROLE.get(seg.role, seg.role) for seg in children]

    def _resolve_ordinal(self, text: str) -> int | None:
        text = text.strip().lower()
        for prefix in ("number ", "item ", "option "):
            if text.startswith(prefix):
                text = text[len(prefix):]
        if text.isdigit():
            return int(text)
        return _ORDINAL_WORDS.get(text)

    def _open_ordinal(self, session: Session, n: int, kind: str) -> Response:
        if not session.active_list:
            return self._respond(session, kind,
                                 "There is no list to pick from yet. Try an outline or a lookup first.")
        if not 1 <= n <= len(session.active_list):
            return self._respond(session, kind,
                                 f"There is no item {n}; the list has {len(session.active_list)} items.")
        label, url = session.active_list[n - 1]
        if url is None:
            return self._respond(session, kind,
                                 f"Item {n} ({label}) is a text mention, not a link.")
        session.last_opened_ordinal = n
        try:
            return self._goto(session, url, kind=kind)
        except FetchError as exc:
            return self._respond(session, kind, f"I couldn't open {label}: {exc}")

    @staticmethod
    def _tokens(text: str) -> set[str]:
        return {t for t in re.findall(r"[a-z0-9]+", text.lower()) if t not in _ARTICLES}

    def _fuzzy_candidates(self, target: str,
                          candidates: list[tuple[str, str]]) -> list[tuple[str, str]]:
        """Best token-overlap matches; returns all candidates tied at the max."""
        wanted = self._tokens(target)
        if not wanted:
            return []
        best_score = 0
        best: list[tuple[str, str]] = []
        seen_urls: set[str] = set()
        for label, url in candidates:
            if url in seen_urls:
                continue
            score = len(wanted & self._tokens(label))
            if score == 0:
                continue
            if score > best_score:
                best_score = score
                best = [(label, url)]
                seen_urls = {url}
            elif score == best_score:
                best.append((label, url))
                seen_urls.add(url)
        return best

    def _page_links(self, session: Session) -> list[tuple[str, str]]:
        links = []
        for segment in page_model.iter_segments(session.current_tree):
            for link in segment.links:
                if link.anchor:
                    links.append((link.anchor, link.href))
        return links

    def do_navigate(self, session: Session, target: str) -> Response:
        if not target.strip():
            return self._respond(session, "Navigate", "Navigate where? Give me a name or a number.")
        ordinal = self._resolve_ordinal(target)
        if ordinal is not None:
            return self._open_ordinal(session, ordinal, "Navigate")
        low = target.strip().lower()
        if low in ("back", "go back", "backwards"):
            if len(session.nav_history) <= 1:
                return self._respond(session, "Navigate", "There is nothing to go back to.")
            session.nav_history.pop()
            url = session.nav_history[-1]
            session.current_url = url
            source = self.fetcher.fetch(url, allowed_hosts={registrable_host(session.seed)})
            session.current_tree = page_model.segment_page(source)
            session.reading_cursor = None
            session.reading_sentences = []
            return self._respond(session, "Navigate", f"Back at {session.current_title}.")
        if self._tokens(low) and self._tokens(low) <= {"main", "home", "front", "page", "start"}:
            if session.current_url == session.seed:
                return self._respond(session, "Navigate",
                                     f"You are already at {session.current_title}.")
            return self._goto(session, session.seed)
        if low in ("next", "next article", "next page", "next item", "next one"):
            n = session.last_opened_ordinal + 1
            while n <= len(session.active_list) and session.active_list[n - 1][1] is None:
                n += 1
            if session.active_list and n <= len(session.active_list):
                return self._open_ordinal(session, n, "Navigate")
            return self._respond(session, "Navigate",
                                 "There is no next item; try a lookup or an outline first.")
        # Fuzzy label match: offerings first, then links on the current page.
        for pool in ([(o.label, o.target_url) for o in session.offerings],
                     self._page_links(session)):
            best = self._fuzzy_candidates(target, pool)
            if len(best) == 1:
                return self._goto(session, best[0][1])
            if len(best) > 1:
                session.active_list = [(label, url) for label, url in best]
                session.last_opened_ordinal = 0
                shown = [(i + 1, label) for i, (label, _) in enumerate(best)]
                session.shown_upto = len(shown)
                return self._respond(
                    session, "Navigate",
                    f"Which one do you mean? {self._enumerate(shown)}", items=shown)
        nearest = [o.label for o in session.offerings[:3]]
        return self._respond(
            session, "Navigate",
            f"I couldn't find \"{target}\". Nearby options: {', '.join(nearest)}.")

    # -- reading -----------------------------------------------------------------

    def _chunk_size(self, session: Session) -> int:
        return 2 if session.prefs.verbosity == "short" else 5

    def do_read(self, session: Session, command: str) -> Response:
        if command == "stop":
            if session.reading_cursor is None:
                return self._respond(session, "ReadStop", "Nothing was being read.")
            session.reading_cursor = None
            session.reading_sentences = []
            return self._respond(session, "ReadStop", "Stopped reading.")
        if command == "start":
            main = page_model.main_segment(session.current_tree)
            text = page_model.subtree_text(main) if main is not None else ""
            sentences = page_model.split_sentences(text)
            if not sentences:
                return self._respond(
                    session, "ReadStart",
                    "Nothing to read here. Sections on this page: "
                    + ", ".join(self._section_names(session)) + ".")
            session.reading_sentences = sentences
            session.reading_cursor = (main.segment_id, 0)
            return self._read_chunk(session, "ReadStart")
        # command == "next"
        if session.reading_cursor is not None:
            return self._read_chunk(session, "ReadNext")
        if session.active_list and session.shown_upto < len(session.active_list):
            limit = self._list_limit(session)
            start = session.shown_upto
            shown = [(start + i + 1, label) for i, (label, _) in
                     enumerate(session.active_list[start:start + limit])]
            session.shown_upto = start + len(shown)
            return self._respond(session, "ReadNext",
                                 f"More options: {self._enumerate(shown)}", items=shown)
        return self._respond(session, "ReadNext", "Nothing is being read right now.")

    def _read_chunk(self, session: Session, kind: str) -> Response:
        segment_id, index = session.reading_cursor
        size = self._chunk_size(session)
        chunk = session.reading_sentences[index:index + size]
        new_index = index + len(chunk)
        session.reading_cursor = (segment_id, new_index)
        if not chunk:
            return self._respond(session, kind,
                                 'You reached the end of the article. Say "stop" to finish.')
        text = " ".join(chunk)
        if new_index >= len(session.reading_sentences):
            text += " End of article."
        return self._respond(session, kind, text)

    # -- lookup ------------------------------------------------------------------

    def _anchor_label(self, session: Session, match: heuristics.LookupMatch) -> str:
        segment = page_model.find_segment(session.current_tree, match.segment_id)
        if segment is not None:
            for link in segment.links:
                if link.href == match.target_url and link.anchor:
                    return link.anchor
        return match.snippet

    def do_lookup(self, session: Session, query: str) -> Response:
        matches = heuristics.lookup(session.current_tree, query)
        nav_items: list[tuple[str, str | None]] = []
        mention_snippets: list[str] = []
        seen_targets: set[str] = set()
        for match in matches:
            if match.kind == "navigation":
                if match.target_url not in seen_targets:
                    seen_targets.add(match.target_url)
                    nav_items.append((self._anchor_label(session, match), match.target_url))
            else:
                mention_snippets.append(match.snippet)
        site_wide = False
        if len(matches) < 3:
            needle = query.lower()
            extra: list[tuple[str, str]] = []
            for url, info in session.graph.nodes.items():
                if needle in info.title.lower() and url not in seen_targets:
                    extra.append((info.title, url))
            for target, entry in session.stats.items():
                if target in seen_targets or any(url == target for _, url in extra):
                    continue
                for anchor in entry.anchor_texts:
                    if needle in anchor.lower():
                        extra.append((anchor, target))
                        break
            if extra:
                site_wide = True
                for label, url in extra:
                    if url not in seen_targets:
                        seen_targets.add(url)
                        nav_items.append((label, url))
        if not nav_items and not mention_snippets:
            return self._respond(session, "Lookup",
                                 f'I found nothing matching "{query}" on this page or the site.')
        session.active_list = nav_items
        session.last_opened_ordinal = 0
        shown = [(i + 1, label) for i, (label, _) in enumerate(nav_items)]
        session.shown_upto = len(shown)
        counts = []
        scope = " across the site" if site_wide else ""
        if shown:
            noun = "article link" if len(shown) == 1 else "article links"
            counts.append(f"{len(shown)} {noun}{scope}")
        if mention_snippets:
            noun = "mention" if len(mention_snippets) == 1 else "mentions"
            counts.append(f"{len(mention_snippets)} {noun}")
        text = f'For "{query}" I found ' + " and ".join(counts) + "."
        if shown:
            text += f" Links: {self._enumerate(shown)}"
        if mention_snippets:
            cleaned = [self._sanitize(s) for s in mention_snippets[:2]]
            quoted = " ".join(f'"{s}"' for s in cleaned)
            text += f" Mentioned in the text: {quoted}"
        if shown:
            text += ' Say "open" and a number to follow a link.'
        return self._respond(session, "Lookup", text, items=shown)

    @staticmethod
    def _sanitize(snippet: str) -> str:
        """Spoken form of a snippet: no placeholder tags, no line breaks."""
        flat = snippet.replace("\n", " ")
        flat = re.sub(r"\s*\[link \d+\]", "", flat)
        return re.sub(r"\s+", " ", flat).strip()

    # -- metadata ------------------------------------------------------------------

    def do_metadata(self, session: Session, intent: Intent) -> Response:
        meta = session.current_tree.metadata
        if intent.kind == "Overview":
            if meta.description:
                text = f"{meta.title}: {meta.description}"
            else:
                text = f"{meta.title}. No description available."
            return self._respond(session, "Overview", text)
        if intent.kind == "About":
            if meta.authors:
                text = "Written by " + ", ".join(meta.authors) + "."
            else:
                text = "No author information is available for this page."
            return self._respond(session, "About", text)
        if intent.kind == "Summary":
            max_sentences = 2 if session.prefs.verbosity == "short" else 4
            result = page_model.summarize(session.current_tree, max_sentences)
            if result.status == "empty":
                return self._respond(session, "Summary",
                                     "There is nothing to summarize on this page.")
            return self._respond(session, "Summary", result.text)
        # YesNoMeta — answers come only from declared metadata, never guessed.
        asked = intent.slots.get("value", "").strip().lower()
        asked_code = _LANGUAGE_CODES.get(asked, asked if len(asked) == 2 else "")
        if not meta.language:
            text = "I don't know — the page does not declare its language."
        elif asked_code and meta.language == asked_code:
            text = f"Yes, the page is in {asked.capitalize() or meta.language}."
        else:
            text = f"No, the declared language is \"{meta.language}\"."
        return self._respond(session, "YesNoMeta", text)

    # -- operations ------------------------------------------------------------------

    _URLISH = re.compile(r"^(https?://\S+|[a-z0-9.-]+\.[a-z]{2,}(/\S*)?)$", re.IGNORECASE)

    def open_site(self, session: Session, seed: str) -> Response:
        """Re-seed the session on a new site; navigation history is cleared."""
        if not seed.lower().startswith(("http://", "https://")):
            seed = "http://" + seed
        try:
            seed = normalize_url(seed)
            graph = self._crawl_site(seed)
            source = self.fetcher.fetch(seed, allowed_hosts={registrable_host(seed)})
        except (NormalizationError, CrawlError, FetchError) as exc:
            return self._respond(session, "Open", f"I couldn't open {seed}: {exc}")
        session.seed = seed
        session.graph = graph
        session.stats = compute_popularity(graph)
        session.offerings = heuristics.rank_offerings(graph, session.stats,
                                                      self.offerings_config)
        session.current_url = seed
        session.current_tree = page_model.segment_page(source)
        session.nav_history = [seed]
        session.reading_cursor = None
        session.reading_sentences = []
        session.active_list = []
        session.shown_upto = 0
        session.last_opened_ordinal = 0
        return self._respond(session, "Open",
                             f"Opened {session.current_title}. "
                             "Your navigation history was cleared.")

    def do_ops(self, session: Session, intent: Intent) -> Response:
        kind = intent.kind
        if kind == "Open":
            target = intent.slots["target"].strip()
            ordinal = self._resolve_ordinal(target)
            if ordinal is not None:
                return self._open_ordinal(session, ordinal, "Navigate")
            pool = session.active_list + [(o.label, o.target_url) for o in session.offerings]
            best = self._fuzzy_candidates(target, [(l, u) for l, u in pool if u])
            if len(best) == 1:
                try:
                    return self._goto(session, best[0][1])
                except FetchError as exc:
                    return self._respond(session, "Navigate",
                                         f"I couldn't open {best[0][0]}: {exc}")
            if self._URLISH.match(target):
                return self.open_site(session, target)
            return self._respond(
                session, "Open",
                "I can open items from a list, pages on this site, or a web "
                "address like https://example.com — but not sites by name.")
        if kind == "Bookmark":
            if any(url == session.current_url for _, url in session.bookmarks):
                return self._respond(session, "Bookmark",
                                     f"{session.current_title} is already bookmarked.")
            session.bookmarks.append((session.current_title, session.current_url))
            return self._respond(session, "Bookmark", f"Bookmarked {session.current_title}.")
        if kind == "SetSpeech":
            delta = 1 if intent.slots.get("direction") == "increase" else -1
            session.prefs.speech_rate = max(1, min(5, session.prefs.speech_rate + delta))
            return self._respond(session, "SetSpeech",
                                 f"Speech rate is now {session.prefs.speech_rate} of 5.")
        # SetVerbosity
        mode = intent.slots.get("mode", "normal")
        session.prefs.verbosity = mode
        state = "on" if mode == "short" else "off"
        return self._respond(session, "SetVerbosity", f"Short interactions are {state}.")
