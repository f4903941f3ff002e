"""Parallel multilingual corpus ingestion.

A corpus is a UTF-8 TSV file: header row ``id<TAB><lang><TAB><lang>...``
followed by one row per sentence id. Every row must fill every language
column. Corpus values are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .uniclasses import WHITESPACE_CLASS

_LANG_RE = re.compile(r"^[a-z0-9_]+$")
_WORD_RE = re.compile(f"[^{WHITESPACE_CLASS}]+")


def validate_language_code(code: str) -> str:
    """Return the code if it is a valid language identifier, else raise."""
    if not code or not _LANG_RE.match(code):
        raise ValidationError(
            f"invalid language code {code!r}: expected lowercase ASCII "
            "letters, digits or underscore"
        )
    return code


@dataclass(frozen=True)
class SentenceRow:
    id: int
    texts: dict[str, str]  # language code -> sentence

    def __post_init__(self):
        if self.id <= 0:
            raise ValidationError(f"row id must be positive, got {self.id}")
        for lang, text in self.texts.items():
            if not text:
                raise ValidationError(f"empty cell (id={self.id}, language={lang})")


@dataclass(frozen=True)
class ParallelCorpus:
    languages: tuple[str, ...]
    rows: tuple[SentenceRow, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.languages) < 2:
            raise ValidationError("corpus needs at least 2 languages")
        if len(set(self.languages)) != len(self.languages):
            raise ValidationError("duplicate language codes in corpus header")
        for lang in self.languages:
            validate_language_code(lang)
        if not self.rows:
            raise ValidationError("corpus has no rows")
        ids = [row.id for row in self.rows]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate row id(s): {dupes}")
        if ids != sorted(ids):
            raise ValidationError("row ids must be sorted ascending")
        for row in self.rows:
            missing = set(self.languages) - set(row.texts)
            if missing:
                raise ValidationError(
                    f"row {row.id} missing language(s): {sorted(missing)}"
                )

    def text(self, lang: str, row_id: int) -> str:
        for row in self.rows:
            if row.id == row_id:
                return row.texts[lang]
        raise KeyError(row_id)


def parse_corpus(source: str, header_present: bool = True, name: str = "") -> ParallelCorpus:
    """Parse TSV text into a ParallelCorpus.

    The first column is ``id``; remaining header cells are language codes.
    LF and CRLF line endings are both accepted. Cell contents are taken
    verbatim (no normalization here; the metrics layer normalizes).
    """
    if not header_present:
        raise ValidationError("headerless corpora are not supported: language codes are required")
    lines = source.replace("\r\n", "\n").split("\n")
    # Trailing blank lines are tolerated; internal blank lines are not.
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty corpus file")

    header = lines[0].split("\t")
    if header[0] != "id":
        raise ParseError(f"first header cell must be 'id', got {header[0]!r}", line=1)
    languages = header[1:]

    rows = []
    seen_ids: set[int] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        cells = raw.split("\t")
        if len(cells) != len(header):
            raise ParseError(
                f"expected {len(header)} cells, got {len(cells)}", line=lineno
            )
        try:
            row_id = int(cells[0])
        except ValueError:
            raise ParseError(f"non-integer id {cells[0]!r}", line=lineno) from None
        if row_id in seen_ids:
            raise ValidationError(f"duplicate id {row_id} (line {lineno})")
        seen_ids.add(row_id)
        rows.append(SentenceRow(id=row_id, texts=dict(zip(languages, cells[1:]))))

    return ParallelCorpus(languages=tuple(languages), rows=tuple(rows), name=name)


def serialize_corpus(corpus: ParallelCorpus) -> str:
    """Inverse of parse_corpus: emit the TSV form (LF line endings)."""
    out = ["\t".join(("id",) + corpus.languages)]
    for row in corpus.rows:
        out.append("\t".join([str(row.id)] + [row.texts[l] for l in corpus.languages]))
    return "\n".join(out) + "\n"


def word_count(text: str) -> int:
    """Number of maximal runs of non-whitespace characters.

    Whitespace is the Unicode White_Space property. This is the fertility
    denominator; Arabic clitic attachment is taken as-is, which is a known
    coarseness of whitespace word boundaries.
    """
    return len(_WORD_RE.findall(text))
