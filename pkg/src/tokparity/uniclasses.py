"""Unicode character classes as `re` character-class strings.

The stdlib `re` module has no \\p{...} syntax, so the classes needed by
the pretokenizer are materialized once per process by scanning the
codepoint space with unicodedata. Building all tables takes well under a
second and is cached.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata

# Unicode White_Space property (PropList.txt). str.isspace() is a superset
# (it also accepts U+001C..001F), so the set is spelled out explicitly.
WHITESPACE_CLASS = (
    "\t-\r \x85\xa0  -     　"
)

WHITESPACE_RE = re.compile(f"[{WHITESPACE_CLASS}]")


@functools.lru_cache(maxsize=None)
def _ranges_by_category() -> dict[str, list[tuple[int, int]]]:
    ranges: dict[str, list[tuple[int, int]]] = {}
    prev_cat = None
    start = 0
    for cp in range(sys.maxunicode + 2):
        cat = unicodedata.category(chr(cp)) if cp <= sys.maxunicode else None
        if cat != prev_cat:
            if prev_cat is not None:
                ranges.setdefault(prev_cat, []).append((start, cp - 1))
            prev_cat = cat
            start = cp
    return ranges


@functools.lru_cache(maxsize=None)
def category_class(*categories: str) -> str:
    """Character-class body matching the given general categories.

    Example: category_class("Lu", "Lt") -> "A-Z\\u00c0-..." suitable for
    embedding inside [...] in an `re` pattern.
    """
    table = _ranges_by_category()
    merged: list[tuple[int, int]] = []
    for cat in categories:
        merged.extend(table.get(cat, []))
    merged.sort()
    parts = []
    for a, b in merged:
        if a == b:
            parts.append(re.escape(chr(a)))
        else:
            parts.append(f"{re.escape(chr(a))}-{re.escape(chr(b))}")
    return "".join(parts)


LETTER_CATS = ("Lu", "Ll", "Lt", "Lm", "Lo")
NUMBER_CATS = ("Nd", "Nl", "No")
MARK_CATS = ("Mn", "Mc", "Me")
