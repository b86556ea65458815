"""Deterministic intent grammar: ordered, anchored, case-insensitive rules.

The grammar is data — an ordered rule list tried first-match-wins — so a
statistical parser can replace it later behind the same contract. Slot text
is passed through verbatim (original casing, no stemming); resolution
against context happens in the dialog engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

INTENT_KINDS = (
    "Outline", "Orientation", "Navigate", "Lookup", "ReadStart", "ReadNext",
    "ReadStop", "Overview", "About", "Summary", "YesNoMeta", "Open",
    "Bookmark", "SetSpeech", "SetVerbosity", "Help", "Unrecognized",
)


@dataclass(frozen=True)
class Intent:
    kind: str
    slots: dict = field(default_factory=dict)
    raw: str = ""


@dataclass(frozen=True)
class Rule:
    name: str
    kind: str
    pattern: str  # anchored (fullmatch), case-insensitive
    fixed_slots: tuple = ()  # (name, value) pairs applied on match

    def compiled(self) -> re.Pattern:
        return re.compile(self.pattern, re.IGNORECASE)


_SITE = r"(?:web\s?site|website|site|page|web page)"

_RULES: list[Rule] = [
    Rule("outline", "Outline",
         r"(?:what can i do(?: (?:in|on|with) (?:this|the) " + _SITE + r")?(?: here)?"
         r"|what are (?:my|the) options(?: here)?"
         r"|outline"
         r"|what does this " + _SITE + r" offer)"),
    Rule("orientation", "Orientation",
         r"(?:where am i|what page is this|what page am i on|current location)"),
    Rule("overview", "Overview",
         r"(?:what is this " + _SITE + r" about"
         r"|what(?:'s| is) this about"
         r"|(?:give me an? )?overview(?: of (?:this|the) " + _SITE + r")?)"),
    Rule("about_authors", "About",
         r"(?:who (?:are the authors?|is the author|wrote)"
         r"(?: of)?(?: (?:this|the) (?:article|page|document|" + _SITE + r"))?"
         r"|(?:list )?(?:the )?authors?)"),
    Rule("summary", "Summary",
         r"(?:summari[sz]e(?: (?:this|the|it))?(?: (?:article|page|document))?"
         r"|(?:give me a )?summary(?: of (?:this|the) (?:article|page|document))?)"),
    Rule("yesno_language", "YesNoMeta",
         r"is (?:this|the) (?:article|page|document|" + _SITE + r") (?:written )?"
         r"in (?P<value>[a-zA-Z ]+)",
         fixed_slots=(("attribute", "language"),)),
    Rule("read_stop", "ReadStop", r"(?:stop(?: reading)?|quiet|pause reading)"),
    Rule("read_start", "ReadStart",
         r"(?:read(?: (?:this|the|it))?(?: (?:article|page|out loud|aloud))?"
         r"|start reading)"),
    Rule("navigate_next_article", "Navigate",
         r"(?:next|previous) (?:article|page|item|one|section)",
         fixed_slots=(("target", "next"),)),
    Rule("read_next", "ReadNext",
         r"(?:next|continue(?: reading)?|keep reading|go on|more)"),
    Rule("navigate_back", "Navigate",
         r"(?:go )?back(?:wards)?", fixed_slots=(("target", "back"),)),
    Rule("navigate", "Navigate",
         r"(?:go|navigate|take me|jump|move) (?:to )?(?P<target>.+)"),
    Rule("lookup", "Lookup",
         r"(?:lookup|look up|search for|search|find) (?P<query>.+)"),
    Rule("open", "Open", r"open (?P<target>.+)"),
    Rule("bookmark", "Bookmark",
         r"bookmark(?: (?:this|the))?(?: page)?(?: (?P<target>.+))?"),
    Rule("speech_up", "SetSpeech",
         r"(?:increase|raise|speed up) (?:the )?speech(?: rate)?|speak faster",
         fixed_slots=(("direction", "increase"),)),
    Rule("speech_down", "SetSpeech",
         r"(?:decrease|lower|slow down) (?:the )?speech(?: rate)?|speak slower",
         fixed_slots=(("direction", "decrease"),)),
    Rule("verbosity_short", "SetVerbosity",
         r"(?:turn on short (?:interactions|responses|mode)|be brief|short mode on)",
         fixed_slots=(("mode", "short"),)),
    Rule("verbosity_normal", "SetVerbosity",
         r"(?:turn off short (?:interactions|responses|mode)|be verbose|short mode off)",
         fixed_slots=(("mode", "normal"),)),
    Rule("help", "Help", r"(?:help|what can you do)"),
]

_COMPILED = [(rule, rule.compiled()) for rule in _RULES]

_TRAILING_PUNCT = re.compile(r"[\s?.!]+$")

REQUIRED_SLOTS = {"Navigate": ("target",), "Lookup": ("query",), "Open": ("target",)}


def rule_table() -> list[Rule]:
    """The full grammar, in match order, for documentation and tests."""
    return list(_RULES)


def parse_utterance(text: str) -> Intent:
    """First matching rule wins; unmatched text becomes Unrecognized."""
    raw = text or ""
    stripped = _TRAILING_PUNCT.sub("", raw.strip())
    if not stripped:
        return Intent(kind="Unrecognized", raw=raw)
    for rule, pattern in _COMPILED:
        match = pattern.fullmatch(stripped)
        if match is None:
            continue
        slots = {k: v.strip() for k, v in match.groupdict().items() if v is not None}
        slots.update(dict(rule.fixed_slots))
        missing = [s for s in REQUIRED_SLOTS.get(rule.kind, ()) if not slots.get(s)]
        if missing:
            continue
        return Intent(kind=rule.kind, slots=slots, raw=raw)
    return Intent(kind="Unrecognized", raw=raw)


def grammar_dump() -> str:
    lines = ["# convbrowse intent grammar (tried in order, first match wins)"]
    for rule in _RULES:
        fixed = "".join(f" {k}={v}" for k, v in rule.fixed_slots)
        lines.append(f"{rule.name:24s} -> {rule.kind}{fixed}")
        lines.append(f"    /{rule.pattern}/i")
    return "\n".join(lines)
