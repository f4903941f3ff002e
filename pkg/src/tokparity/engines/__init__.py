"""Tokenizer engines: local BPE and unigram inference, remote counting."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .base import Encoding, TokenizerId
from .bpe import BpeModel, decode_bpe, encode_bpe, load_bpe, save_bpe
from .pretoken import PretokenSpec
from .remote import Cassette, RemoteCounter, cassette_key, credential_env_var
from .trainer import train_bpe
from .unigram import (
    BYTE_FALLBACK_LOG_PROB,
    UnigramModel,
    decode_unigram,
    encode_unigram,
    load_unigram,
    save_unigram,
    unigram_from_rank_vocab,
)


def encode(model, text: str) -> Encoding:
    """Dispatch to the engine matching the model type."""
    if isinstance(model, BpeModel):
        return encode_bpe(model, text)
    if isinstance(model, UnigramModel):
        return encode_unigram(model, text)
    raise ValidationError(f"not a local tokenizer model: {type(model).__name__}")


def decode(model, token_ids) -> bytes:
    """Concatenated token bytes for the given ids."""
    if isinstance(model, BpeModel):
        return decode_bpe(model, token_ids)
    if isinstance(model, UnigramModel):
        return decode_unigram(model, token_ids)
    raise ValidationError(f"not a local tokenizer model: {type(model).__name__}")


@dataclass(frozen=True)
class LocalEngine:
    """A loaded local model tagged with its tokenizer identity."""

    tokenizer: TokenizerId
    model: object  # BpeModel | UnigramModel

    def encode(self, text: str) -> Encoding:
        return encode(self.model, text)


__all__ = [
    "BYTE_FALLBACK_LOG_PROB",
    "BpeModel",
    "Cassette",
    "Encoding",
    "LocalEngine",
    "PretokenSpec",
    "RemoteCounter",
    "TokenizerId",
    "UnigramModel",
    "cassette_key",
    "credential_env_var",
    "decode",
    "decode_bpe",
    "decode_unigram",
    "encode",
    "encode_bpe",
    "encode_unigram",
    "load_bpe",
    "load_unigram",
    "save_bpe",
    "save_unigram",
    "train_bpe",
    "unigram_from_rank_vocab",
]
