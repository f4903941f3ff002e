"""Exception hierarchy shared across the toolkit."""


class TokParityError(Exception):
    """Base class for all toolkit errors."""


class ParseError(TokParityError):
    """Malformed input file (bad arity, undecodable line, ...)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TokParityError):
    """Input is structurally readable but violates an invariant."""


class ModelLoadError(TokParityError):
    """Tokenizer model file could not be loaded."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DecodeError(TokParityError):
    """A token id has no byte sequence in the model."""

    def __init__(self, token_id: int):
        self.token_id = token_id
        super().__init__(f"unknown token id {token_id}")


class DegenerateError(TokParityError):
    """An aggregate cannot be formed (e.g. zero pivot mean)."""


class RemoteError(TokParityError):
    """Base class for remote token-counting failures."""


class RemoteAuthError(RemoteError):
    """Credential missing or rejected by the provider."""


class RemoteRateLimitError(RemoteError):
    """Provider rate limit exhausted after retries."""


class RemoteNetworkError(RemoteError):
    """Transport-level failure talking to the provider."""
