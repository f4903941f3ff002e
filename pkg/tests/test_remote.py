import json

import pytest

from tokparity import Cassette, RemoteCounter, TokenizerId
from tokparity.engines.remote import cassette_key, credential_env_var
from tokparity.errors import RemoteAuthError, RemoteError, RemoteNetworkError

TID = TokenizerId("anthropic", "claude-sonnet-4-5-20250929", "remote")


@pytest.fixture
def creds(monkeypatch):
    monkeypatch.setenv(credential_env_var("anthropic"), "test-key")


class TestCassette:
    def test_replay_without_network(self, tmp_path, monkeypatch):
        monkeypatch.delenv(credential_env_var("anthropic"), raising=False)
        path = tmp_path / "cassette.json"
        path.write_text(json.dumps({cassette_key(TID.provider, TID.model, "hello"): 4}))
        counter = RemoteCounter(TID, cassette=Cassette(str(path)))
        assert counter.count("hello") == 4  # no credential needed on a hit

    def test_miss_then_record(self, tmp_path, creds):
        path = tmp_path / "cassette.json"
        counter = RemoteCounter(
            TID, cassette=Cassette(str(path)), transport=lambda t, text, c: len(text.split())
        )
        assert counter.count("one two three") == 3
        # fresh cassette instance replays from disk
        replay = RemoteCounter(TID, cassette=Cassette(str(path)), transport=_boom)
        assert replay.count("one two three") == 3


def _boom(tokenizer, text, credential):
    raise AssertionError("transport must not be called on a cassette hit")


class TestRemoteCounter:
    def test_missing_credential_is_auth_error(self, monkeypatch):
        monkeypatch.delenv(credential_env_var("anthropic"), raising=False)
        with pytest.raises(RemoteAuthError, match="TOKPARITY_ANTHROPIC_KEY"):
            RemoteCounter(TID).count("hello")

    def test_auth_failure_propagates(self, creds):
        def reject(tokenizer, text, credential):
            raise RemoteAuthError("rejected")

        with pytest.raises(RemoteAuthError):
            RemoteCounter(TID, transport=reject).count("hello")

    def test_no_fabrication_on_failure(self, creds, tmp_path):
        def flaky(tokenizer, text, credential):
            raise RemoteNetworkError("down")

        cassette = Cassette(str(tmp_path / "c.json"))
        counter = RemoteCounter(
            TID, cassette=cassette, transport=flaky, max_retries=1, backoff_base=0.0
        )
        with pytest.raises(RemoteNetworkError):
            counter.count("hello")
        assert cassette.get(TID.provider, TID.model, "hello") is None

    def test_retry_then_success(self, creds):
        calls = []

        def eventually(tokenizer, text, credential):
            calls.append(1)
            if len(calls) < 3:
                raise RemoteNetworkError("transient")
            return 7

        counter = RemoteCounter(TID, transport=eventually, max_retries=3, backoff_base=0.0)
        assert counter.count("hello") == 7
        assert len(calls) == 3

    def test_kind_checked(self):
        with pytest.raises(RemoteError):
            RemoteCounter(TokenizerId("openai", "gpt-4.1", "bpe_byte"))
