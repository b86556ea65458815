"""URL normalization helpers shared by the fetcher, crawler, and evaluator."""

from __future__ import annotations

from urllib.parse import urljoin, urlsplit, urlunsplit

DEFAULT_PORTS = {"http": 80, "https": 443}


class NormalizationError(ValueError):
    """Raised when a URL cannot be normalized; message names the input."""


def normalize_url(raw: str, base: str | None = None) -> str:
    """Normalize ``raw`` (optionally relative to ``base``) to a canonical absolute URL.

    Scheme and host are lowercased, the fragment is dropped, default ports are
    removed, an empty path becomes "/", and the query string is preserved
    verbatim.
    """
    if raw is None or not raw.strip():
        raise NormalizationError(f"cannot normalize empty URL {raw!r}")
    raw = raw.strip()
    try:
        resolved = urljoin(base, raw) if base else raw
        parts = urlsplit(resolved)
        scheme = parts.scheme.lower()
        if scheme not in ("http", "https"):
            raise NormalizationError(f"unsupported scheme in {raw!r}")
        host = parts.hostname
        if not host:
            raise NormalizationError(f"no host in {raw!r}")
        host = host.lower()
        port = parts.port
    except NormalizationError:
        raise
    except ValueError as exc:  # bad port, malformed IPv6 literal, ...
        raise NormalizationError(f"malformed URL {raw!r}: {exc}") from exc
    netloc = host
    if port is not None and port != DEFAULT_PORTS.get(scheme):
        netloc = f"{host}:{port}"
    if parts.username:
        userinfo = parts.username
        if parts.password:
            userinfo += f":{parts.password}"
        netloc = f"{userinfo}@{netloc}"
    path = parts.path or "/"
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def registrable_host(url: str) -> str:
    """Site boundary for crawl policy: the last two host labels (or the whole host)."""
    host = urlsplit(url).hostname or ""
    host = host.lower()
    labels = host.split(".")
    if len(labels) <= 2 or host.replace(".", "").isdigit():
        return host
    return ".".join(labels[-2:])


def same_site(a: str, b: str) -> bool:
    return registrable_host(a) == registrable_host(b)
