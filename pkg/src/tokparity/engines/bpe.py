"""Byte-level rank-merge BPE inference.

The model format is the published rank-vocabulary layout: one line per
token, ``base64(token_bytes)`` + single space + decimal rank. Merge ranks
are implicit: a pair of adjacent tokens is mergeable iff the concatenation
of their bytes is in the vocabulary, and its rank is the concatenation's
rank. Encoding therefore never needs an explicit merge table.
"""

from __future__ import annotations

import base64
import binascii
from dataclasses import dataclass, field

from ..errors import DecodeError, ModelLoadError, ValidationError
from .base import Encoding
from .pretoken import PretokenSpec


@dataclass(frozen=True)
class BpeModel:
    vocab: dict[bytes, int]
    pretokenizer: PretokenSpec = PretokenSpec()
    specials: dict[str, int] = field(default_factory=dict)
    decoder: dict[int, bytes] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        missing = [b for b in range(256) if bytes([b]) not in self.vocab]
        if missing:
            raise ValidationError(
                f"vocab is missing single-byte token(s) {missing[:5]}"
                f"{'...' if len(missing) > 5 else ''}: byte-level completeness required"
            )
        if self.decoder is None:
            object.__setattr__(
                self, "decoder", {i: b for b, i in self.vocab.items()}
            )

    def __len__(self) -> int:
        return len(self.vocab)

    def pair_rank(self, left: bytes, right: bytes) -> int | None:
        """Merge rank of an adjacent pair, or None if not mergeable."""
        return self.vocab.get(left + right)


def load_bpe(path: str, pretokenizer: PretokenSpec | None = None) -> BpeModel:
    """Load a rank-vocabulary file."""
    vocab: dict[bytes, int] = {}
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip(b"\r\n")
            if not line:
                continue
            parts = line.split(b" ")
            if len(parts) != 2:
                raise ModelLoadError("expected 'base64 rank'", line=lineno)
            try:
                token = base64.b64decode(parts[0], validate=True)
            except (binascii.Error, ValueError):
                raise ModelLoadError(
                    f"malformed base64 {parts[0][:30]!r}", line=lineno
                ) from None
            try:
                rank = int(parts[1])
            except ValueError:
                raise ModelLoadError(
                    f"non-integer rank {parts[1][:30]!r}", line=lineno
                ) from None
            if token in vocab:
                raise ModelLoadError(f"duplicate token {token!r}", line=lineno)
            vocab[token] = rank
    if len(set(vocab.values())) != len(vocab):
        raise ModelLoadError("duplicate ranks in vocabulary")
    return BpeModel(vocab=vocab, pretokenizer=pretokenizer or PretokenSpec())


def save_bpe(model: BpeModel, path: str) -> None:
    """Write the rank-vocabulary file form (inverse of load_bpe)."""
    entries = sorted(model.vocab.items(), key=lambda kv: kv[1])
    with open(path, "wb") as fh:
        for token, rank in entries:
            fh.write(base64.b64encode(token) + b" " + str(rank).encode() + b"\n")


def _merge_chunk(chunk: bytes, vocab: dict[bytes, int]) -> list[bytes]:
    """Greedy lowest-rank-first merging of one pretoken chunk."""
    parts = [chunk[i : i + 1] for i in range(len(chunk))]
    while len(parts) > 1:
        best_rank = None
        best_i = -1
        for i in range(len(parts) - 1):
            rank = vocab.get(parts[i] + parts[i + 1])
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank, best_i = rank, i
        if best_rank is None:
            break
        parts[best_i : best_i + 2] = [parts[best_i] + parts[best_i + 1]]
    return parts


def encode_bpe(model: BpeModel, text: str) -> Encoding:
    """Tokenize text; lossless by byte-level completeness.

    fallback_flags marks single-byte tokens lying strictly inside a
    multi-byte character (the operational signature of sub-character
    segmentation).
    """
    token_ids: list[int] = []
    spans: list[tuple[int, int]] = []
    flags: list[bool] = []
    offset = 0
    for pretoken in model.pretokenizer.split(text):
        chunk = pretoken.encode("utf-8")
        multibyte = _multibyte_positions(pretoken)
        pos = 0
        for piece in _merge_chunk(chunk, model.vocab):
            token_ids.append(model.vocab[piece])
            spans.append((offset + pos, len(piece)))
            flags.append(len(piece) == 1 and pos in multibyte)
            pos += len(piece)
        offset += len(chunk)
    return Encoding(tuple(token_ids), tuple(spans), tuple(flags))


def _multibyte_positions(text: str) -> set[int]:
    """Byte offsets belonging to characters wider than one byte."""
    positions = set()
    pos = 0
    for ch in text:
        width = len(ch.encode("utf-8"))
        if width > 1:
            positions.update(range(pos, pos + width))
        pos += width
    return positions


def decode_bpe(model: BpeModel, token_ids) -> bytes:
    out = bytearray()
    for tid in token_ids:
        piece = model.decoder.get(tid)
        if piece is None:
            raise DecodeError(tid)
        out.extend(piece)
    return bytes(out)
