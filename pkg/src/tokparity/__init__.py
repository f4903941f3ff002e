"""tokparity: tokenization-parity and embedding-geometry audit toolkit."""

__version__ = "0.1.0"

from .corpus import ParallelCorpus, SentenceRow, parse_corpus, serialize_corpus, word_count
from .engines import (
    BpeModel,
    Cassette,
    Encoding,
    LocalEngine,
    PretokenSpec,
    RemoteCounter,
    TokenizerId,
    UnigramModel,
    decode,
    encode,
    encode_bpe,
    encode_unigram,
    load_bpe,
    load_unigram,
    save_bpe,
    save_unigram,
    train_bpe,
)
from .geometry import (
    EmbeddingSet,
    GeometryReport,
    anisotropy,
    association_probe,
    parse_embeddings,
    spectrum,
    subspace_convergence,
)
from .metrics import (
    CostModel,
    FertilityStats,
    aggregate,
    cost_projection,
    tokenize_corpus,
)
from .report import AuditReport, emit_json, emit_markdown, emit_tsv, parse_json
