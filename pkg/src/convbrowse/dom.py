"""Minimal tolerant HTML tree on top of html.parser.

Good enough for real-world tag soup: unknown end tags are ignored, unclosed
elements are closed when an enclosing element ends, and a handful of
elements (p, li, ...) auto-close a same-tag sibling.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser
from typing import Iterator

VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
    "meta", "param", "source", "track", "wbr",
}

# Starting one of these implicitly closes an open element of the same tag.
AUTO_CLOSE_SAME = {"p", "li", "tr", "td", "th", "dd", "dt", "option"}

_WS = re.compile(r"\s+")


class Node:
    """One element; children are Node or str (text)."""

    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None,
                 parent: "Node | None" = None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[Node | str] = []
        self.parent = parent

    def __repr__(self) -> str:
        return f"<Node {self.tag} children={len(self.children)}>"

    def get(self, attr: str, default: str = "") -> str:
        return self.attrs.get(attr, default)

    def iter_elements(self) -> Iterator["Node"]:
        """All element descendants in document order, self excluded."""
        for child in self.children:
            if isinstance(child, Node):
                yield child
                yield from child.iter_elements()

    def find(self, *tags: str) -> "Node | None":
        for el in self.iter_elements():
            if el.tag in tags:
                return el
        return None

    def find_all(self, *tags: str) -> list["Node"]:
        return [el for el in self.iter_elements() if el.tag in tags]

    def text(self, skip_tags: tuple[str, ...] = ("script", "style", "template")) -> str:
        """Whitespace-normalized visible text of the subtree."""
        parts: list[str] = []

        def walk(node: Node) -> None:
            for child in node.children:
                if isinstance(child, str):
                    parts.append(child)
                elif child.tag not in skip_tags:
                    walk(child)

        walk(self)
        return _WS.sub(" ", "".join(parts)).strip()

    def ancestors(self) -> Iterator["Node"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node("#document")
        self.stack = [self.root]

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        if tag in AUTO_CLOSE_SAME and self.stack[-1].tag == tag:
            self.stack.pop()
        node = Node(tag, {k.lower(): (v or "") for k, v in attrs}, parent=self.stack[-1])
        self.stack[-1].children.append(node)
        if tag not in VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        node = Node(tag, {k.lower(): (v or "") for k, v in attrs}, parent=self.stack[-1])
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag: str) -> None:
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # Unmatched end tag: ignore.

    def handle_data(self, data: str) -> None:
        if data:
            self.stack[-1].children.append(data)


def parse_html(text: str) -> Node:
    """Parse HTML tolerantly; never raises on tag soup."""
    builder = _TreeBuilder()
    try:
        builder.feed(text)
        builder.close()
    except Exception:  # html.parser is robust, but never let soup escape
        pass
    return builder.root


def find_by_id(root: Node, element_id: str) -> Node | None:
    for el in root.iter_elements():
        if el.get("id") == element_id:
            return el
    return None
