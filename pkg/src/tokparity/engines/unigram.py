"""Unigram-LM Viterbi segmentation with byte fallback.

Model format is a documented JSON export (see README for how to dump a
SentencePiece model into it):

    {"pieces": [["<piece>", <log_prob>], ...], "byte_fallback": true}

With byte_fallback enabled, 256 synthetic byte pieces (log-prob
BYTE_FALLBACK_LOG_PROB each) guarantee every character is encodable, at a
strong but finite penalty — the "down to the character level" degradation
mode. Without it, uncoverable characters become one unk-penalized token
each so token counts stay well-defined.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import DecodeError, ModelLoadError, ValidationError
from .base import Encoding

BYTE_FALLBACK_LOG_PROB = -20.0
DEFAULT_UNK_PENALTY = -30.0

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class UnigramModel:
    pieces: tuple[tuple[str, float], ...]
    byte_fallback: bool = True
    unk_penalty: float = DEFAULT_UNK_PENALTY
    # derived lookups
    piece_ids: dict[str, int] = field(default=None)  # type: ignore[assignment]
    max_piece_len: int = 0

    def __post_init__(self):
        if not self.pieces:
            raise ValidationError("unigram model needs at least one piece")
        seen: dict[str, int] = {}
        for idx, (piece, log_prob) in enumerate(self.pieces):
            if not piece:
                raise ValidationError(f"empty piece at index {idx}")
            if piece in seen:
                raise ValidationError(f"duplicate piece {piece!r}")
            if not math.isfinite(log_prob) or log_prob > 0:
                raise ValidationError(
                    f"piece {piece!r} has invalid log_prob {log_prob}"
                )
            seen[piece] = idx
        if not math.isfinite(self.unk_penalty):
            raise ValidationError("unk_penalty must be finite")
        object.__setattr__(self, "piece_ids", seen)
        object.__setattr__(self, "max_piece_len", max(len(p) for p, _ in self.pieces))

    # Id layout: pieces get 0..n-1; with byte_fallback bytes get n..n+255;
    # the unk sentinel (no byte_fallback) is n.
    def byte_id(self, b: int) -> int:
        return len(self.pieces) + b

    @property
    def unk_id(self) -> int:
        return len(self.pieces)

    def log_prob(self, piece: str) -> float | None:
        idx = self.piece_ids.get(piece)
        return self.pieces[idx][1] if idx is not None else None


def load_unigram(path: str) -> UnigramModel:
    """Load the unigram JSON export."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelLoadError(f"invalid JSON: {exc}") from None
    if isinstance(data, list):  # bare [["piece", lp], ...] array accepted
        data = {"pieces": data}
    if "pieces" not in data:
        raise ModelLoadError("missing 'pieces' key")
    pieces = []
    for entry in data["pieces"]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ModelLoadError(f"bad piece entry {entry!r}")
        piece, log_prob = entry
        pieces.append((str(piece), float(log_prob)))
    return UnigramModel(
        pieces=tuple(pieces),
        byte_fallback=bool(data.get("byte_fallback", True)),
        unk_penalty=float(data.get("unk_penalty", DEFAULT_UNK_PENALTY)),
    )


def save_unigram(model: UnigramModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "pieces": [[p, lp] for p, lp in model.pieces],
                "byte_fallback": model.byte_fallback,
                "unk_penalty": model.unk_penalty,
            },
            fh,
            ensure_ascii=False,
        )


def unigram_from_rank_vocab(
    vocab: dict[bytes, int],
    top_n: int = 32000,
    byte_fallback: bool = True,
) -> UnigramModel:
    """Derive a demonstration unigram model from a BPE rank vocabulary.

    Takes the top_n lowest-rank tokens that decode as UTF-8 and assigns
    log-probs by a Zipf-style rank law (-log(rank + 10)). The result
    inherits the rank vocabulary's language skew, which makes it a useful
    local stand-in when no SentencePiece export is available.
    """
    pieces = []
    seen: set[str] = set()
    for token, rank in sorted(vocab.items(), key=lambda kv: kv[1]):
        if rank >= top_n:
            break
        try:
            piece = token.decode("utf-8")
        except UnicodeDecodeError:
            continue
        if not piece or piece in seen:
            continue
        seen.add(piece)
        pieces.append((piece, -math.log(rank + 10)))
    return UnigramModel(pieces=tuple(pieces), byte_fallback=byte_fallback)


def encode_unigram(model: UnigramModel, text: str) -> Encoding:
    """Maximum-log-probability segmentation (Viterbi over char positions).

    Ties are broken toward fewer tokens, then toward the longer last
    piece, so encoding is deterministic.
    """
    n = len(text)
    if n == 0:
        return Encoding((), (), ())

    # best[i]: (log_prob, token_count, back_pointer, kind) for text[:i]
    best_lp = [_NEG_INF] * (n + 1)
    best_cnt = [0] * (n + 1)
    back = [(-1, "")] * (n + 1)  # (start, kind); kind "piece" | "fallback"
    best_lp[0] = 0.0

    for end in range(1, n + 1):
        lo = max(0, end - model.max_piece_len)
        for start in range(lo, end):
            if best_lp[start] == _NEG_INF:
                continue
            lp = model.log_prob(text[start:end])
            if lp is None:
                continue
            cand = best_lp[start] + lp
            if _better(cand, best_cnt[start] + 1, end - start,
                       best_lp[end], best_cnt[end], end - back[end][0]):
                best_lp[end] = cand
                best_cnt[end] = best_cnt[start] + 1
                back[end] = (start, "piece")
        # per-character escape hatch so segmentation always exists
        start = end - 1
        if best_lp[start] > _NEG_INF:
            ch_bytes = text[start:end].encode("utf-8")
            if model.byte_fallback:
                cand = best_lp[start] + BYTE_FALLBACK_LOG_PROB * len(ch_bytes)
                cnt = best_cnt[start] + len(ch_bytes)
            else:
                cand = best_lp[start] + model.unk_penalty
                cnt = best_cnt[start] + 1
            if _better(cand, cnt, 1, best_lp[end], best_cnt[end], end - back[end][0]):
                best_lp[end] = cand
                best_cnt[end] = cnt
                back[end] = (start, "fallback")

    # reconstruct
    segments: list[tuple[int, int, str]] = []
    end = n
    while end > 0:
        start, kind = back[end]
        segments.append((start, end, kind))
        end = start
    segments.reverse()

    token_ids: list[int] = []
    spans: list[tuple[int, int]] = []
    flags: list[bool] = []
    byte_off = 0
    for start, end, kind in segments:
        seg = text[start:end]
        seg_bytes = seg.encode("utf-8")
        if kind == "piece":
            token_ids.append(model.piece_ids[seg])
            spans.append((byte_off, len(seg_bytes)))
            flags.append(False)
        elif model.byte_fallback:
            for j, b in enumerate(seg_bytes):
                token_ids.append(model.byte_id(b))
                spans.append((byte_off + j, 1))
                flags.append(True)
        else:
            token_ids.append(model.unk_id)
            spans.append((byte_off, len(seg_bytes)))
            flags.append(False)
        byte_off += len(seg_bytes)
    return Encoding(tuple(token_ids), tuple(spans), tuple(flags))


def _better(lp, cnt, last_len, cur_lp, cur_cnt, cur_last_len) -> bool:
    if lp != cur_lp:
        return lp > cur_lp
    if cnt != cur_cnt:
        return cnt < cur_cnt
    return last_len > cur_last_len


def segmentation_log_prob(model: UnigramModel, encoding: Encoding, text: str) -> float:
    """Total log-probability of an encoding produced by encode_unigram."""
    total = 0.0
    data = text.encode("utf-8")
    for tid, (off, length), fb in zip(
        encoding.token_ids, encoding.spans, encoding.fallback_flags
    ):
        if fb:
            total += BYTE_FALLBACK_LOG_PROB
        elif tid == model.unk_id and not model.byte_fallback:
            total += model.unk_penalty
        else:
            total += model.pieces[tid][1]
    return total


def decode_unigram(model: UnigramModel, token_ids) -> bytes:
    out = bytearray()
    n = len(model.pieces)
    for tid in token_ids:
        if 0 <= tid < n:
            out.extend(model.pieces[tid][0].encode("utf-8"))
        elif model.byte_fallback and n <= tid < n + 256:
            out.append(tid - n)
        else:
            raise DecodeError(tid)
    return bytes(out)
