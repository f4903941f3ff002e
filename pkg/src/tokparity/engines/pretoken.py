"""Pre-segmentation of text into chunks before byte-pair merging.

Three modes:

* ``none`` — the whole text is one chunk.
* ``whitespace`` — each chunk is a run of non-whitespace with its leading
  whitespace attached; a trailing whitespace run is its own chunk.
* ``unicode-category`` — the GPT-class category pattern: letter/mark runs
  with an optional single non-letter prefix (split at lower-to-upper case
  boundaries), digit groups of at most three, punctuation runs with an
  optional leading space, and whitespace kept off the following word
  except for its last character. This mirrors the published rank-vocab
  encoders closely enough that parity is checked empirically against a
  golden file rather than assumed.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass

from ..errors import ValidationError
from ..uniclasses import (
    LETTER_CATS,
    MARK_CATS,
    NUMBER_CATS,
    WHITESPACE_CLASS,
    category_class,
)

MODES = ("none", "whitespace", "unicode-category")


@dataclass(frozen=True)
class PretokenSpec:
    mode: str = "unicode-category"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown pretokenizer mode {self.mode!r}")

    def split(self, text: str) -> list[str]:
        if self.mode == "none":
            return [text] if text else []
        return _pattern(self.mode).findall(text) if text else []


@functools.lru_cache(maxsize=None)
def _pattern(mode: str) -> re.Pattern[str]:
    ws = WHITESPACE_CLASS
    if mode == "whitespace":
        return re.compile(f"[{ws}]*[^{ws}]+|[{ws}]+")

    letters = category_class(*LETTER_CATS)
    numbers = category_class(*NUMBER_CATS)
    # "upperish" and "lowerish" runs: modifier/other letters and combining
    # marks may appear in either, so case splitting only bites on cased
    # scripts. Contraction suffixes are spelled out because Python 3.10
    # lacks scoped (?i:) groups.
    upper = category_class("Lu", "Lt", "Lm", "Lo", *MARK_CATS)
    lower = category_class("Ll", "Lm", "Lo", *MARK_CATS)
    contraction = r"(?:'[sS]|'[tT]|'[rR][eE]|'[vV][eE]|'[mM]|'[lL][lL]|'[dD])?"
    return re.compile(
        f"[^\\r\\n{letters}{numbers}]?[{upper}]*[{lower}]+{contraction}"
        f"|[^\\r\\n{letters}{numbers}]?[{upper}]+[{lower}]*{contraction}"
        f"|[{numbers}]{{1,3}}"
        f"| ?[^{ws}{letters}{numbers}]+[\\r\\n/]*"
        f"|[{ws}]*[\\r\\n]+"
        f"|[{ws}]+(?![^{ws}])"
        f"|[{ws}]+"
    )
