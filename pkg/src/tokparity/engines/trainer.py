"""Parity-aware byte-level BPE training.

Standard BPE over pretokenized byte chunks, except that each language's
text stream is repeated in proportion to its weight (integerized by
rounding weight / min weight) before counting — deliberate oversampling
of low-resource languages so the learned vocabulary serves them
comparably. Ties on pair frequency go to the lexicographically smaller
byte pair, making training deterministic.
"""

from __future__ import annotations

from collections import Counter

from ..corpus import ParallelCorpus
from ..errors import ValidationError
from .bpe import BpeModel
from .pretoken import PretokenSpec


def train_bpe(
    corpus: ParallelCorpus,
    vocab_size: int,
    language_weights: dict[str, float] | None = None,
    pretokenizer: PretokenSpec | None = None,
) -> BpeModel:
    if vocab_size < 256:
        raise ValidationError(f"vocab_size must be >= 256, got {vocab_size}")
    weights = dict(language_weights or {l: 1.0 for l in corpus.languages})
    missing = set(corpus.languages) - set(weights)
    if missing:
        raise ValidationError(f"weights missing corpus language(s): {sorted(missing)}")
    for lang, w in weights.items():
        if w <= 0:
            raise ValidationError(f"weight for {lang!r} must be positive, got {w}")

    pretokenizer = pretokenizer or PretokenSpec()
    min_w = min(weights[l] for l in corpus.languages)

    # chunk -> occurrence count, with language streams repeated by weight
    chunk_counts: Counter[bytes] = Counter()
    for lang in corpus.languages:
        repeats = max(1, round(weights[lang] / min_w))
        for row in corpus.rows:
            for pretoken in pretokenizer.split(row.texts[lang]):
                chunk_counts[pretoken.encode("utf-8")] += repeats

    # working state: each distinct chunk as a tuple of byte-string parts
    chunks: list[tuple[list[bytes], int]] = [
        ([bytes([b]) for b in chunk], count)
        for chunk, count in sorted(chunk_counts.items())
    ]

    vocab: dict[bytes, int] = {bytes([b]): b for b in range(256)}
    next_id = 256
    while next_id < vocab_size:
        pair_counts: Counter[tuple[bytes, bytes]] = Counter()
        for parts, count in chunks:
            for i in range(len(parts) - 1):
                pair_counts[(parts[i], parts[i + 1])] += count
        # a merge result must be a new vocab entry
        candidates = {
            pair: n for pair, n in pair_counts.items()
            if pair[0] + pair[1] not in vocab
        }
        if not candidates:
            break
        best_n = max(candidates.values())
        pair = min(p for p, n in candidates.items() if n == best_n)
        merged = pair[0] + pair[1]
        vocab[merged] = next_id
        next_id += 1
        for parts, _ in chunks:
            i = 0
            while i < len(parts) - 1:
                if parts[i] == pair[0] and parts[i + 1] == pair[1]:
                    parts[i : i + 2] = [merged]
                else:
                    i += 1

    return BpeModel(vocab=vocab, pretokenizer=pretokenizer)
