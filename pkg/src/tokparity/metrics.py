"""Per-(tokenizer, language) tokenization-fairness statistics.

mean_input_tokens is the quantity benchmarked in the ten-sentence table;
ratio_vs_pivot is the token inflation ratio against the pivot language
(English in the published table). Fertility is the micro-average
tokens-per-word (corpus-level sums, not a per-row mean of ratios).
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass

from .corpus import ParallelCorpus, word_count
from .engines import Encoding, LocalEngine, RemoteCounter, TokenizerId
from .errors import DegenerateError, RemoteError, ValidationError

NORMALIZATION_MODES = ("nfc", "none")


@dataclass(frozen=True)
class FertilityStats:
    tokenizer: TokenizerId
    lang: str
    n_rows: int
    mean_input_tokens: float
    std_input_tokens: float
    tokens_per_word: float
    ratio_vs_pivot: float
    byte_fallback_rate: float | None  # None when the engine cannot report it
    incomplete: bool = False

    def __post_init__(self):
        if self.n_rows <= 0:
            raise ValidationError("n_rows must be positive")
        if self.byte_fallback_rate is not None and not (
            0.0 <= self.byte_fallback_rate <= 1.0
        ):
            raise ValidationError("byte_fallback_rate must be in [0, 1]")


@dataclass(frozen=True)
class CostModel:
    price_per_million_input_tokens: float

    def __post_init__(self):
        if self.price_per_million_input_tokens <= 0:
            raise ValidationError("price must be strictly positive")


def normalize_text(text: str, mode: str = "nfc") -> str:
    if mode == "nfc":
        return unicodedata.normalize("NFC", text)
    if mode == "none":
        return text
    raise ValidationError(f"unknown normalization mode {mode!r}")


def tokenize_corpus(
    corpus: ParallelCorpus,
    engine,
    normalization: str = "nfc",
    allow_partial: bool = False,
    overhead: int = 0,
):
    """One Encoding (local) or count (remote) per (language, row id).

    Returns (results, failures): results maps (lang, row_id) to an
    Encoding or int; failures lists (lang, row_id, error) and is only
    populated under allow_partial — otherwise the first remote failure
    aborts the audit.
    """
    results: dict[tuple[str, int], Encoding | int] = {}
    failures: list[tuple[str, int, RemoteError]] = []
    for lang in corpus.languages:
        for row in corpus.rows:
            text = normalize_text(row.texts[lang], normalization)
            try:
                if isinstance(engine, RemoteCounter):
                    value: Encoding | int = engine.count(text) + overhead
                else:
                    enc = engine.encode(text)
                    value = enc if overhead == 0 else _pad(enc, overhead)
            except RemoteError as exc:
                if not allow_partial:
                    raise
                failures.append((lang, row.id, exc))
                continue
            results[(lang, row.id)] = value
    return results, failures


def _pad(enc: Encoding, overhead: int) -> int:
    # per-request special-token overhead turns the cell into a bare count
    return len(enc) + overhead


def _count(value: Encoding | int) -> int:
    return len(value) if isinstance(value, Encoding) else int(value)


def aggregate(
    results: dict[tuple[str, int], Encoding | int],
    corpus: ParallelCorpus,
    pivot: str,
    tokenizer: TokenizerId,
) -> list[FertilityStats]:
    """Fold per-cell results into one FertilityStats per language."""
    if pivot not in corpus.languages:
        raise ValidationError(f"pivot {pivot!r} not in corpus languages")
    pivot_counts = [
        _count(results[(pivot, row.id)])
        for row in corpus.rows
        if (pivot, row.id) in results
    ]
    if len(pivot_counts) != len(corpus.rows):
        raise ValidationError("results incomplete for pivot language")
    pivot_mean = sum(pivot_counts) / len(pivot_counts)
    if pivot_mean == 0:
        raise DegenerateError("pivot mean token count is zero; cannot form ratios")

    stats = []
    for lang in corpus.languages:
        cells = [
            (row, results[(lang, row.id)])
            for row in corpus.rows
            if (lang, row.id) in results
        ]
        if not cells:
            continue
        incomplete = len(cells) < len(corpus.rows)
        counts = [_count(v) for _, v in cells]
        n = len(counts)
        mean = sum(counts) / n
        std = math.sqrt(sum((c - mean) ** 2 for c in counts) / n)  # population
        total_words = sum(word_count(row.texts[lang]) for row, _ in cells)
        encodings = [v for _, v in cells if isinstance(v, Encoding)]
        if len(encodings) == len(cells):
            total_tokens = sum(len(e) for e in encodings)
            fallback = sum(sum(e.fallback_flags) for e in encodings)
            fallback_rate = fallback / total_tokens if total_tokens else 0.0
        else:
            fallback_rate = None  # remote engines cannot report it
        stats.append(
            FertilityStats(
                tokenizer=tokenizer,
                lang=lang,
                n_rows=n,
                mean_input_tokens=mean,
                std_input_tokens=std,
                tokens_per_word=sum(counts) / total_words if total_words else 0.0,
                ratio_vs_pivot=1.0 if lang == pivot else mean / pivot_mean,
                byte_fallback_rate=fallback_rate,
                incomplete=incomplete,
            )
        )
    return stats


def cost_projection(
    stats: FertilityStats, pivot_stats: FertilityStats, cost: CostModel
) -> tuple[float, float, float]:
    """(linear cost ratio, cost per 1000 queries, quadratic projection).

    The linear ratio follows input tokens directly; the quadratic one
    (ratio squared) is the training-cost analogue under attention whose
    cost grows with the square of sequence length — doubled fertility
    multiplies it by four.
    """
    if stats.tokenizer != pivot_stats.tokenizer:
        raise ValidationError(
            f"mismatched tokenizers: {stats.tokenizer} vs {pivot_stats.tokenizer}"
        )
    ratio = stats.ratio_vs_pivot
    per_1000 = stats.mean_input_tokens * 1000 * cost.price_per_million_input_tokens / 1e6
    return ratio, per_1000, ratio**2


def display_mean(value: float) -> str:
    """Means render to 1 decimal (display only; stored values stay exact)."""
    return f"{value:.1f}"


def display_ratio(value: float) -> str:
    """Ratios render to 3 decimals with trailing zeros trimmed ("1.0", "3.94")."""
    text = f"{value:.3f}".rstrip("0")
    if text.endswith("."):
        text += "0"
    return text
