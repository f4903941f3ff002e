import math
import random
from pathlib import Path

import pytest

from tokparity import (
    BpeModel,
    PretokenSpec,
    UnigramModel,
    load_bpe,
    parse_corpus,
)

REPO = Path(__file__).resolve().parent.parent
FIXTURE_TSV = REPO / "fixtures" / "appendix2.tsv"
O200K_FILE = REPO / "models" / "o200k_base.tiktoken"
MISTRAL_UNIGRAM_FILE = REPO / "models" / "mistral7b_unigram.json"
GOLDEN_FILE = REPO / "tests" / "data" / "golden_o200k.json"


@pytest.fixture(scope="session")
def fixture_corpus():
    return parse_corpus(FIXTURE_TSV.read_text(encoding="utf-8"), name="appendix2")


@pytest.fixture(scope="session")
def o200k_model():
    return load_bpe(str(O200K_FILE))


@pytest.fixture(scope="session")
def byte_model():
    """256-entry model: tokenizes every input into its raw bytes."""
    return BpeModel(
        vocab={bytes([b]): b for b in range(256)},
        pretokenizer=PretokenSpec("none"),
    )


@pytest.fixture
def toy_unigram():
    return UnigramModel(
        pieces=(("a", -1.0), ("b", -1.0), ("ab", -1.5)),
        byte_fallback=True,
    )


def random_unigram_model(seed: int, alphabet: str = "abc", n_multi: int = 3) -> UnigramModel:
    """Random small model over `alphabet`: all single chars plus n_multi
    multi-char pieces, for brute-force comparisons."""
    rng = random.Random(seed)
    pieces = {ch: -rng.uniform(0.5, 3.0) for ch in alphabet}
    while len(pieces) < len(alphabet) + n_multi:
        length = rng.randint(2, 3)
        piece = "".join(rng.choice(alphabet) for _ in range(length))
        pieces.setdefault(piece, -rng.uniform(0.5, 6.0))
    return UnigramModel(pieces=tuple(pieces.items()), byte_fallback=True)


def brute_force_best_log_prob(model: UnigramModel, text: str) -> float:
    """Max segmentation log-prob by enumerating all 2^(n-1) split points."""
    n = len(text)
    best = -math.inf
    for mask in range(1 << max(n - 1, 0)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1] + [n]
        total = 0.0
        ok = True
        for a, b in zip(cuts, cuts[1:]):
            seg = text[a:b]
            lp = model.log_prob(seg)
            if lp is None:
                if len(seg) == 1:
                    from tokparity.engines.unigram import BYTE_FALLBACK_LOG_PROB

                    lp = BYTE_FALLBACK_LOG_PROB * len(seg.encode("utf-8"))
                else:
                    ok = False
                    break
            total += lp
        if ok:
            best = max(best, total)
    return best


RANDOM_TEXT_POOLS = [
    "abcdefghijklmnopqrstuvwxyz ABCDE'.,!?0123456789",
    "éàçèùœâîôû ëïü",
    "ابتثجحخدذرزسشصضطظعغفقكلمنهوي ًٌٍَُِّْ؟،",
    "你好世界漢字測試",
    "😀🎉🚀𝔘𝔫𝔦𝔠𝔬𝔡𝔢𓀀𓂀",  # astral plane
    "‏‎ عرب abc⁦bidi⁩",  # bidi controls
    " \t\n\r  ",
]


def random_utf8_strings(n: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        pool = rng.choice(RANDOM_TEXT_POOLS)
        out.append("".join(rng.choice(pool) for _ in range(rng.randint(0, 30))))
    return out
