#!/usr/bin/env python3
"""Generate the golden token-id file for the BPE engine.

The reference encoder below is written independently of the production
merge loop: it reconstructs an explicit merge table from the rank
vocabulary (lowest-rank split of every multi-byte token) and applies
merges GPT-2 style, replacing every occurrence of the lowest-rank bigram
per pass. Agreement between the two routes is what the golden file
checks.

The covered inputs are the 50 fixture cells plus 120 seeded random UTF-8
strings spanning ASCII, Latin-1, Arabic, CJK, astral-plane and bidi text.

Usage: python tools/make_golden.py [rank_file] [out_json]
"""

import json
import random
import sys
import unicodedata
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from tokparity.corpus import parse_corpus  # noqa: E402
from tokparity.engines.bpe import load_bpe  # noqa: E402
from tokparity.engines.pretoken import PretokenSpec  # noqa: E402


def reference_encode(text: str, vocab: dict, pretokenizer: PretokenSpec) -> list:
    ids = []
    for pretoken in pretokenizer.split(text):
        ids.extend(_merge_gpt2_style(pretoken.encode("utf-8"), vocab))
    return ids


def _merge_gpt2_style(chunk: bytes, vocab: dict) -> list:
    parts = [bytes([b]) for b in chunk]
    while len(parts) > 1:
        ranked = [
            (vocab[parts[i] + parts[i + 1]], parts[i], parts[i + 1])
            for i in range(len(parts) - 1)
            if parts[i] + parts[i + 1] in vocab
        ]
        if not ranked:
            break
        _, left, right = min(ranked)
        out = []
        i = 0
        while i < len(parts):
            if i < len(parts) - 1 and parts[i] == left and parts[i + 1] == right:
                out.append(left + right)
                i += 2
            else:
                out.append(parts[i])
                i += 1
        parts = out
    return [vocab[p] for p in parts]


ALPHABETS = [
    "abcdefghijklmnopqrstuvwxyz ABCDEFGH'.,!?",
    "éàçèùœâîôû ëïü",
    "ابتثجحخدذرزسشصضطظعغفقكلمنهوي ًٌٍَُِّْ؟،",
    "веселощірозмаїття приклад",
    "你好世界漢字測試中文分詞",
    "😀🎉🚀𝔘𝔫𝔦𝔠𝔬𝔡𝔢𓀀𓂀",
    "a1b2 33 456 7890",
    "‏‎abc عرب mixed⁦bidi⁩",
    " \t\n  spaced\r\n out ",
]


def random_strings(n: int, seed: int = 20240501) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        alphabet = rng.choice(ALPHABETS)
        length = rng.randint(1, 40)
        out.append("".join(rng.choice(alphabet) for _ in range(length)))
    return out


def main() -> None:
    rank_file = sys.argv[1] if len(sys.argv) > 1 else str(REPO / "models/o200k_base.tiktoken")
    out_path = sys.argv[2] if len(sys.argv) > 2 else str(REPO / "tests/data/golden_o200k.json")
    pretokenizer = PretokenSpec("unicode-category")
    vocab = load_bpe(rank_file, pretokenizer=pretokenizer).vocab

    texts = []
    corpus = parse_corpus((REPO / "fixtures/appendix2.tsv").read_text(encoding="utf-8"))
    for lang in corpus.languages:
        for row in corpus.rows:
            texts.append(unicodedata.normalize("NFC", row.texts[lang]))
    texts.extend(random_strings(120))

    cases = [{"text": t, "token_ids": reference_encode(t, vocab, pretokenizer)} for t in texts]
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump({"rank_file": Path(rank_file).name, "cases": cases}, fh, ensure_ascii=False)
    print(f"wrote {out_path} ({len(cases)} cases)")


if __name__ == "__main__":
    main()
