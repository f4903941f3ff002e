"""Types shared by all tokenizer engines."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError


@dataclass(frozen=True)
class Encoding:
    """Result of tokenizing one text with a local engine.

    spans are (byte_offset, byte_length) into the UTF-8 encoding of the
    input; for lossless engines they are contiguous, non-overlapping and
    cover the input exactly. fallback_flags marks tokens produced by byte
    fallback (sub-character segmentation).
    """

    token_ids: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]
    fallback_flags: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.token_ids) == len(self.spans) == len(self.fallback_flags)):
            raise ValidationError("token_ids, spans and fallback_flags must align")

    def __len__(self) -> int:
        return len(self.token_ids)


@dataclass(frozen=True)
class TokenizerId:
    provider: str
    model: str
    kind: str  # "bpe_byte" | "unigram" | "remote"

    KINDS = ("bpe_byte", "unigram", "remote")

    def __post_init__(self):
        if not self.provider or not self.model:
            raise ValidationError("provider and model must be non-empty")
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown tokenizer kind {self.kind!r}")
