"""Remote token-counting adapter with a replayable cassette.

Provider counts (the anthropic rows of the benchmark) come from a hosted
counting endpoint and are otherwise non-reproducible at desk scale, so
every successful count is written to a cassette file — a JSON map from
the hex digest of (provider, model, text) to the integer count. Audits
replay offline from the cassette; counts are never fabricated on failure.

Credentials come from the environment (``TOKPARITY_<PROVIDER>_KEY``),
never from CLI flags.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from ..errors import (
    RemoteAuthError,
    RemoteError,
    RemoteNetworkError,
    RemoteRateLimitError,
)
from .base import TokenizerId

# transport(id, text, credential) -> int; injectable for tests.
Transport = Callable[[TokenizerId, str, str], int]


def cassette_key(provider: str, model: str, text: str) -> str:
    payload = b"\x00".join(s.encode("utf-8") for s in (provider, model, text))
    return hashlib.sha256(payload).hexdigest()


class Cassette:
    """Single-writer JSON store of remote counts."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._data: dict[str, int] = {}
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                self._data = {k: int(v) for k, v in json.load(fh).items()}

    def get(self, provider: str, model: str, text: str) -> int | None:
        return self._data.get(cassette_key(provider, model, text))

    def put(self, provider: str, model: str, text: str, count: int) -> None:
        with self._lock:
            self._data[cassette_key(provider, model, text)] = count
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(self._data, fh, indent=0, sort_keys=True)
            os.replace(tmp, self.path)


def credential_env_var(provider: str) -> str:
    return f"TOKPARITY_{provider.upper()}_KEY"


def _anthropic_transport(tokenizer: TokenizerId, text: str, credential: str) -> int:
    import requests

    try:
        resp = requests.post(
            "https://api.anthropic.com/v1/messages/count_tokens",
            headers={
                "x-api-key": credential,
                "anthropic-version": "2023-06-01",
                "content-type": "application/json",
            },
            json={
                "model": tokenizer.model,
                "messages": [{"role": "user", "content": text}],
            },
            timeout=30,
        )
    except requests.RequestException as exc:
        raise RemoteNetworkError(str(exc)) from exc
    if resp.status_code in (401, 403):
        raise RemoteAuthError(f"provider rejected credential ({resp.status_code})")
    if resp.status_code == 429:
        raise RemoteRateLimitError("rate limited")
    if resp.status_code != 200:
        raise RemoteError(f"unexpected status {resp.status_code}: {resp.text[:200]}")
    return int(resp.json()["input_tokens"])


_TRANSPORTS: dict[str, Transport] = {"anthropic": _anthropic_transport}


@dataclass
class RemoteCounter:
    """Counts tokens via a provider endpoint, cassette-first.

    max_in_flight bounds concurrent requests; transient failures retry
    with exponential backoff before surfacing a RemoteError.
    """

    tokenizer: TokenizerId
    cassette: Cassette | None = None
    transport: Transport | None = None
    max_in_flight: int = 4
    max_retries: int = 3
    backoff_base: float = 1.0
    _gate: threading.Semaphore = field(init=False, repr=False)

    def __post_init__(self):
        if self.tokenizer.kind != "remote":
            raise RemoteError(f"not a remote tokenizer: {self.tokenizer}")
        self._gate = threading.Semaphore(self.max_in_flight)

    def count(self, text: str) -> int:
        if self.cassette is not None:
            hit = self.cassette.get(self.tokenizer.provider, self.tokenizer.model, text)
            if hit is not None:
                return hit
        credential = os.environ.get(credential_env_var(self.tokenizer.provider), "")
        if not credential:
            raise RemoteAuthError(
                f"no credential: set {credential_env_var(self.tokenizer.provider)}"
            )
        transport = self.transport or _TRANSPORTS.get(self.tokenizer.provider)
        if transport is None:
            raise RemoteError(f"no transport for provider {self.tokenizer.provider!r}")
        count = self._call_with_retry(transport, text, credential)
        if self.cassette is not None:
            self.cassette.put(
                self.tokenizer.provider, self.tokenizer.model, text, count
            )
        return count

    def _call_with_retry(self, transport: Transport, text: str, credential: str) -> int:
        delay = self.backoff_base
        for attempt in range(self.max_retries + 1):
            try:
                with self._gate:
                    return transport(self.tokenizer, text, credential)
            except (RemoteRateLimitError, RemoteNetworkError):
                if attempt == self.max_retries:
                    raise
                time.sleep(delay)
                delay *= 2
        raise AssertionError("unreachable")
