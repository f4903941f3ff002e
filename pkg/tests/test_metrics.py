import pytest

from tokparity import (
    CostModel,
    FertilityStats,
    LocalEngine,
    RemoteCounter,
    TokenizerId,
    UnigramModel,
    aggregate,
    cost_projection,
    parse_corpus,
    tokenize_corpus,
)
from tokparity.engines.remote import credential_env_var
from tokparity.errors import DegenerateError, RemoteError, ValidationError

BYTE_TID = TokenizerId("local", "byte-identity", "bpe_byte")


def make_stats(tid, lang, mean, ratio, fallback=0.0, n=10):
    return FertilityStats(
        tokenizer=tid,
        lang=lang,
        n_rows=n,
        mean_input_tokens=mean,
        std_input_tokens=0.0,
        tokens_per_word=1.0,
        ratio_vs_pivot=ratio,
        byte_fallback_rate=fallback,
    )


class TestTokenizeCorpus:
    def test_byte_identity_counts(self, fixture_corpus, byte_model):
        engine = LocalEngine(BYTE_TID, byte_model)
        results, failures = tokenize_corpus(fixture_corpus, engine, normalization="nfc")
        assert not failures
        import unicodedata

        for (lang, row_id), enc in results.items():
            text = unicodedata.normalize("NFC", fixture_corpus.text(lang, row_id))
            assert len(enc) == len(text.encode("utf-8"))

    def test_remote_failure_aborts_without_allow_partial(self, fixture_corpus, monkeypatch):
        monkeypatch.setenv(credential_env_var("anthropic"), "k")

        def fail(tokenizer, text, credential):
            raise RemoteError("nope")

        counter = RemoteCounter(
            TokenizerId("anthropic", "m", "remote"), transport=fail, max_retries=0
        )
        with pytest.raises(RemoteError):
            tokenize_corpus(fixture_corpus, counter)

    def test_allow_partial_collects_failures(self, fixture_corpus, monkeypatch):
        monkeypatch.setenv(credential_env_var("anthropic"), "k")

        def some_arabic_rows_fail(tokenizer, text, credential):
            if "الإنترنت" in text:  # rows 8 and 10 of the Arabic-script columns
                raise RemoteError("nope")
            return len(text)

        counter = RemoteCounter(
            TokenizerId("anthropic", "m", "remote"),
            transport=some_arabic_rows_fail,
            max_retries=0,
        )
        results, failures = tokenize_corpus(fixture_corpus, counter, allow_partial=True)
        assert failures
        stats = aggregate(results, fixture_corpus, "en", counter.tokenizer)
        incomplete = {s.lang for s in stats if s.incomplete}
        assert "ar_msa" in incomplete

    def test_overhead_adds_constant_per_row(self, fixture_corpus, byte_model):
        engine = LocalEngine(BYTE_TID, byte_model)
        plain, _ = tokenize_corpus(fixture_corpus, engine)
        padded, _ = tokenize_corpus(fixture_corpus, engine, overhead=3)
        for key in plain:
            assert padded[key] == len(plain[key]) + 3


class TestAggregate:
    def test_paper_ratio_arithmetic(self):
        # 33.1 / 8.4 rounds to 3.94; 31.8 / 15.4 to 2.065
        corpus = parse_corpus(
            "id\ten\tar_msa\n" + "\n".join(f"{i}\tx\ty" for i in range(1, 11))
        )
        results = {}
        ar = [34, 33, 33, 33, 33, 33, 33, 33, 33, 33]  # mean 33.1
        en = [9, 9, 9, 9, 8, 8, 8, 8, 8, 8]  # mean 8.4
        for row, c_en, c_ar in zip(corpus.rows, en, ar):
            results[("en", row.id)] = c_en
            results[("ar_msa", row.id)] = c_ar
        stats = {s.lang: s for s in aggregate(results, corpus, "en", BYTE_TID)}
        assert stats["ar_msa"].ratio_vs_pivot == pytest.approx(33.1 / 8.4)
        from tokparity.metrics import display_ratio

        assert display_ratio(stats["ar_msa"].ratio_vs_pivot) == "3.94"
        assert display_ratio(31.8 / 15.4) == "2.065"

    def test_pivot_identity_exact(self, fixture_corpus, byte_model):
        engine = LocalEngine(BYTE_TID, byte_model)
        results, _ = tokenize_corpus(fixture_corpus, engine)
        stats = {s.lang: s for s in aggregate(results, fixture_corpus, "en", BYTE_TID)}
        assert stats["en"].ratio_vs_pivot == 1.0

    def test_duplicating_rows_is_scale_invariant(self, byte_model):
        base = parse_corpus("id\ten\tfr\n1\thello there\tbonjour la\n2\tbye\tau revoir")
        doubled = parse_corpus(
            "id\ten\tfr\n1\thello there\tbonjour la\n2\tbye\tau revoir"
            "\n3\thello there\tbonjour la\n4\tbye\tau revoir"
        )
        engine = LocalEngine(BYTE_TID, byte_model)

        def table(corpus):
            results, _ = tokenize_corpus(corpus, engine)
            return {
                s.lang: (s.mean_input_tokens, s.ratio_vs_pivot, s.tokens_per_word,
                         s.byte_fallback_rate)
                for s in aggregate(results, corpus, "en", BYTE_TID)
            }

        assert table(base) == table(doubled)

    def test_permutation_invariance(self, fixture_corpus, byte_model):
        engine = LocalEngine(BYTE_TID, byte_model)
        results, _ = tokenize_corpus(fixture_corpus, engine)
        shuffled = dict(reversed(list(results.items())))
        assert aggregate(results, fixture_corpus, "en", BYTE_TID) == aggregate(
            shuffled, fixture_corpus, "en", BYTE_TID
        )

    def test_zero_pivot_mean_degenerate(self):
        corpus = parse_corpus("id\ten\tfr\n1\tx\ty")
        with pytest.raises(DegenerateError):
            aggregate({("en", 1): 0, ("fr", 1): 3}, corpus, "en", BYTE_TID)

    def test_fallback_rate_all_fallback(self, fixture_corpus):
        # pieces share no character with the Arabic column -> rate 1
        model = UnigramModel(pieces=(("z", -1.0),), byte_fallback=True)
        engine = LocalEngine(TokenizerId("local", "z-only", "unigram"), model)
        results, _ = tokenize_corpus(fixture_corpus, engine)
        stats = {s.lang: s for s in aggregate(results, fixture_corpus, "en", engine.tokenizer)}
        ar = stats["ar_msa"]
        assert ar.byte_fallback_rate == pytest.approx(1.0)


class TestCostProjection:
    def test_doubled_fertility_quadruples_quadratic(self):
        tid = BYTE_TID
        pivot = make_stats(tid, "en", 10.0, 1.0)
        lang = make_stats(tid, "xx", 20.0, 2.0)
        ratio, _, quadratic = cost_projection(lang, pivot, CostModel(1.0))
        assert ratio == 2.0
        assert quadratic == 4.0

    def test_pivot_is_unit(self):
        pivot = make_stats(BYTE_TID, "en", 10.0, 1.0)
        ratio, _, quadratic = cost_projection(pivot, pivot, CostModel(5.0))
        assert ratio == 1.0 and quadratic == 1.0

    def test_absolute_cost_per_1000_queries(self):
        tid = TokenizerId("HF", "mistral-7b", "unigram")
        pivot = make_stats(tid, "en", 8.4, 1.0)
        ar = make_stats(tid, "ar_msa", 33.1, 33.1 / 8.4)
        ratio, per_1000, _ = cost_projection(ar, pivot, CostModel(1.0))
        assert per_1000 == pytest.approx(0.0331)
        assert ratio == pytest.approx(3.94, abs=0.005)

    def test_mismatched_tokenizer_rejected(self):
        a = make_stats(TokenizerId("a", "m", "remote"), "en", 1.0, 1.0)
        b = make_stats(TokenizerId("b", "m", "remote"), "en", 1.0, 1.0)
        with pytest.raises(ValidationError):
            cost_projection(a, b, CostModel(1.0))
