"""Page fetching: HTTP and fixture transports, origin policy, disk cache with TTL.

A transport is any callable ``(url, config) -> (status, content_type, body)``.
The built-in ones are:

- ``HttpTransport``   — real network access via requests, with a per-host
  politeness delay enforced across threads.
- ``FixtureTransport`` — resolves URLs against local fixture directories,
  one directory per host; no network, no delay.
- ``MappingTransport`` — in-memory ``{url: html}`` map with a request
  counter; used by tests and synthetic crawls.

``Fetcher`` wraps a transport with the origin policy and size/status checks;
``CachedFetcher`` adds the disk cache (body file + ``key:value`` metadata
sidecar, atomic writes, expiry by TTL).
"""

from __future__ import annotations

import dataclasses
import hashlib
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .urls import registrable_host

log = logging.getLogger(__name__)

CACHE_DIR_ENV = "CONVBROWSE_CACHE_DIR"
DEFAULT_TTL_SECONDS = 24 * 3600


@dataclass(frozen=True)
class PageSource:
    """One retrieved document."""

    url: str
    body: str
    fetched_at: float  # UTC seconds
    status: int
    content_type: str = "text/html"


@dataclass
class FetchConfig:
    timeout: float = 10.0
    user_agent: str = "convbrowse/0.1"
    max_body_bytes: int = 2_000_000


class FetchError(Exception):
    """Base class for fetch failures."""


class FetchTimeout(FetchError):
    pass


class HttpStatusError(FetchError):
    def __init__(self, url: str, status: int):
        super().__init__(f"fetch of {url} returned status {status}")
        self.status = status


class BodyTooLargeError(FetchError):
    pass


class DisallowedOriginError(FetchError):
    pass


class NotFetchedError(FetchError):
    """Transport-level failure (connection refused, DNS, missing fixture file)."""


Transport = Callable[[str, FetchConfig], tuple[int, str, str]]


class HttpTransport:
    """Static HTTP GET with a minimum delay between requests to the same host."""

    def __init__(self, min_delay: float = 0.2, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.min_delay = min_delay
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last_request: dict[str, float] = {}

    def _wait_for_host(self, host: str) -> None:
        with self._lock:
            now = self._clock()
            last = self._last_request.get(host)
            if last is None or now - last >= self.min_delay:
                self._last_request[host] = now
                return
            # Claim the next slot while holding the lock so concurrent
            # callers queue up instead of all waking at once.
            slot = last + self.min_delay
            self._last_request[host] = slot
            wait = slot - now
        self._sleep(wait)

    def __call__(self, url: str, config: FetchConfig) -> tuple[int, str, str]:
        import requests

        from urllib.parse import urlsplit
        host = urlsplit(url).hostname or ""
        self._wait_for_host(host)
        try:
            resp = requests.get(
                url,
                timeout=config.timeout,
                headers={"User-Agent": config.user_agent},
                stream=True,
            )
        except requests.Timeout as exc:
            raise FetchTimeout(f"fetch of {url} timed out after {config.timeout}s") from exc
        except requests.RequestException as exc:
            raise NotFetchedError(f"fetch of {url} failed: {exc}") from exc
        with resp:
            chunks: list[bytes] = []
            size = 0
            for chunk in resp.iter_content(chunk_size=65536):
                size += len(chunk)
                if size > config.max_body_bytes:
                    raise BodyTooLargeError(
                        f"body of {url} exceeds {config.max_body_bytes} bytes")
                chunks.append(chunk)
            encoding = resp.encoding or "utf-8"
            body = b"".join(chunks).decode(encoding, errors="replace")
            ctype = resp.headers.get("Content-Type", "text/html").split(";")[0].strip()
            return resp.status_code, ctype, body


class FixtureTransport:
    """Serves pages from local directories, one per host; '/' maps to index.html."""

    def __init__(self, roots: dict[str, str | Path]):
        self.roots = {host.lower(): Path(root) for host, root in roots.items()}
        self.request_count = 0
        self._lock = threading.Lock()

    def __call__(self, url: str, config: FetchConfig) -> tuple[int, str, str]:
        from urllib.parse import urlsplit

        with self._lock:
            self.request_count += 1
        parts = urlsplit(url)
        host = (parts.hostname or "").lower()
        root = self.roots.get(host)
        if root is None:
            raise NotFetchedError(f"no fixture root for host {host!r} ({url})")
        path = parts.path
        if path.endswith("/") or not path:
            path += "index.html"
        candidate = (root / path.lstrip("/")).resolve()
        if root.resolve() not in candidate.parents and candidate != root.resolve():
            raise NotFetchedError(f"fixture path escapes root: {url}")
        if not candidate.is_file():
            return 404, "text/html", ""
        return 200, "text/html", candidate.read_text(encoding="utf-8")


class MappingTransport:
    """In-memory {url: html}; counts requests so tests can observe cache hits."""

    def __init__(self, pages: dict[str, str]):
        self.pages = dict(pages)
        self.request_count = 0
        self.requested: list[str] = []
        self._lock = threading.Lock()

    def __call__(self, url: str, config: FetchConfig) -> tuple[int, str, str]:
        with self._lock:
            self.request_count += 1
            self.requested.append(url)
        if url not in self.pages:
            return 404, "text/html", ""
        return 200, "text/html", self.pages[url]


class Fetcher:
    """Retrieves one page through a transport, enforcing policy.

    ``kind`` is "static" for the built-in transports; a post-execution
    renderer can be plugged in as a transport with ``kind="rendered"`` —
    the returned PageSource has identical field semantics.
    """

    def __init__(self, transport: Transport, config: FetchConfig | None = None,
                 kind: str = "static"):
        if kind not in ("static", "rendered"):
            raise ValueError(f"unknown fetcher kind {kind!r}")
        self.transport = transport
        self.config = config or FetchConfig()
        self.kind = kind

    def fetch(self, url: str, allowed_hosts: frozenset[str] | set[str] | None = None) -> PageSource:
        if allowed_hosts is not None and registrable_host(url) not in allowed_hosts:
            raise DisallowedOriginError(
                f"{url} is outside the allowed origin set {sorted(allowed_hosts)}")
        status, content_type, body = self.transport(url, self.config)
        if not (200 <= status < 300):
            raise HttpStatusError(url, status)
        if len(body.encode("utf-8", errors="replace")) > self.config.max_body_bytes:
            raise BodyTooLargeError(
                f"body of {url} exceeds {self.config.max_body_bytes} bytes")
        if not body:
            raise FetchError(f"fetch of {url} succeeded but returned an empty body")
        return PageSource(url=url, body=body, fetched_at=time.time(),
                          status=status, content_type=content_type)


def default_cache_dir() -> Path:
    override = os.environ.get(CACHE_DIR_ENV)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "convbrowse"


class CachedFetcher:
    """Disk cache in front of a Fetcher.

    One ``<key>.body`` file plus a ``<key>.meta`` sidecar per entry, keyed by
    a stable hash of (fetcher kind, normalized URL) so rendered and static
    copies never collide. Cache I/O failures degrade to an uncached fetch
    with a warning; they are never fatal.
    """

    def __init__(self, fetcher: Fetcher, cache_dir: str | Path | None = None,
                 ttl_seconds: int = DEFAULT_TTL_SECONDS,
                 clock: Callable[[], float] = time.time):
        self.fetcher = fetcher
        self.cache_dir = Path(cache_dir) if cache_dir else default_cache_dir()
        self.ttl_seconds = ttl_seconds
        self._clock = clock

    @property
    def kind(self) -> str:
        return self.fetcher.kind

    def _key(self, url: str) -> str:
        return hashlib.sha256(f"{self.fetcher.kind}|{url}".encode()).hexdigest()

    def _read(self, url: str, ttl_seconds: int) -> PageSource | None:
        key = self._key(url)
        meta_path = self.cache_dir / f"{key}.meta"
        body_path = self.cache_dir / f"{key}.body"
        if not meta_path.is_file() or not body_path.is_file():
            return None
        meta: dict[str, str] = {}
        for line in meta_path.read_text(encoding="utf-8").splitlines():
            name, _, value = line.partition(":")
            meta[name] = value
        fetched_at = float(meta["fetched_at"])
        if self._clock() - fetched_at >= ttl_seconds:
            return None
        return PageSource(
            url=meta["url"],
            body=body_path.read_text(encoding="utf-8"),
            fetched_at=fetched_at,
            status=int(meta["status"]),
            content_type=meta.get("content_type", "text/html"),
        )

    def _write(self, source: PageSource) -> None:
        key = self._key(source.url)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        meta = (
            f"url:{source.url}\n"
            f"fetched_at:{source.fetched_at!r}\n"
            f"status:{source.status}\n"
            f"content_type:{source.content_type}\n"
        )
        for suffix, payload in ((".body", source.body), (".meta", meta)):
            fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self.cache_dir / f"{key}{suffix}")

    def fetch(self, url: str, allowed_hosts: frozenset[str] | set[str] | None = None,
              ttl_seconds: int | None = None) -> PageSource:
        ttl = self.ttl_seconds if ttl_seconds is None else ttl_seconds
        if allowed_hosts is not None and registrable_host(url) not in allowed_hosts:
            raise DisallowedOriginError(
                f"{url} is outside the allowed origin set {sorted(allowed_hosts)}")
        try:
            hit = self._read(url, ttl)
        except (OSError, ValueError, KeyError) as exc:
            log.warning("cache read failed for %s (%s); fetching uncached", url, exc)
            hit = None
        if hit is not None:
            return hit
        source = self.fetcher.fetch(url, allowed_hosts=allowed_hosts)
        # Expiry is judged against this cache's clock, so the stored
        # timestamp must come from the same clock.
        source = dataclasses.replace(source, fetched_at=self._clock())
        try:
            self._write(source)
        except OSError as exc:
            log.warning("cache write failed for %s (%s); continuing uncached", url, exc)
        return source
