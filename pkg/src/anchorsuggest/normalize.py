"""Text cleaning shared by the anchor and query-log ingestion paths.

Anchor texts are split on sentence-ish separators, stripped of braced
asides, lowercased and whitespace-collapsed before they are counted.
Queries go through the same cleaning minus the separator splitting.
"""

import re

# A separator splits only when the *next* character is a space, so the
# hyphen in "e-mail" survives but "News. Sport" becomes two strings.
SEPARATORS = ".?!|-;"
_SPLIT_RE = re.compile(r"[.?!|;-] ")

_OPENERS = "({["
_CLOSERS = {")": "(", "}": "{", "]": "["}

# Literal markers that flag a query/anchor as being a URL fragment.
URL_MARKERS = ("http:", "https:", "www.", ".com", ".net", ".org", ".edu")


def split_anchor(text: str) -> list[str]:
    """Split an anchor text at every separator-followed-by-space.

    The separator and the space are consumed; empty fragments are
    dropped. Returns the whole text as a single fragment when no
    separator+space occurs.
    """
    return [frag for frag in _SPLIT_RE.split(text) if frag]


def remove_braced(text: str) -> str:
    """Delete every (), {} and [] region, braces included.

    Each brace kind is matched independently by depth. An unmatched
    opener deletes through the end of the string; an unmatched closer
    is deleted by itself.
    """
    depth = {"(": 0, "{": 0, "[": 0}
    open_total = 0
    kept = []
    for ch in text:
        if ch in depth:
            depth[ch] += 1
            open_total += 1
        elif ch in _CLOSERS:
            kind = _CLOSERS[ch]
            if depth[kind] > 0:
                depth[kind] -= 1
                open_total -= 1
            # unmatched closer: dropped on its own
        elif open_total == 0:
            kept.append(ch)
    return "".join(kept)


def normalize(text: str) -> str | None:
    """Full cleaning for corpus text: brace removal, lowercase, collapse.

    Returns None when nothing survives (the caller skips the string).
    """
    collapsed = " ".join(remove_braced(text).lower().split())
    return collapsed or None


def normalize_prefix(text: str) -> str:
    """Cleaning for live query prefixes: lowercase and collapse only.

    Brace removal and separator splitting are corpus-cleaning rules and
    deliberately not applied to what a user is typing.
    """
    return " ".join(text.lower().split())


def contains_url_substring(text: str) -> bool:
    """True iff any URL marker occurs anywhere in the (lowercase) text."""
    return any(marker in text for marker in URL_MARKERS)
