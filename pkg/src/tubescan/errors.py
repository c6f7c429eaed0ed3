"""Exception hierarchy shared by the scanner modules."""

from __future__ import annotations


class TubescanError(Exception):
    """Base class for all scanner errors."""


class LexiconError(TubescanError, ValueError):
    """Lexicon file or lexicon contents violate the documented format."""


class QuotaExhausted(TubescanError):
    """Quota budget cannot cover the next request."""


class TransportError(TubescanError):
    """Network or HTTP failure while talking to a live endpoint."""


class FixtureMiss(TubescanError):
    """Replay mode lookup for a request that was never recorded."""

    def __init__(self, key: str):
        super().__init__(f"no recorded response for {key}")
        self.key = key


class ApiRejection(TubescanError):
    """The API answered with a non-2xx status and an error payload."""

    def __init__(self, status: int, reason: str, message: str = ""):
        super().__init__(f"API rejected request ({status} {reason}): {message}".rstrip(": "))
        self.status = status
        self.reason = reason
        self.message = message


class FetcherUnavailable(TubescanError):
    """A live web fetch was attempted while running in replay mode."""


class InvalidWeights(TubescanError, ValueError):
    """Weight or threshold table contains negative or non-finite values."""


class DuplicateRecord(TubescanError):
    """A (video_id, scan_id) pair is already present in the store."""


class StorageFailure(TubescanError):
    """The store file could not be read or written."""


class UnknownScanId(TubescanError):
    """A scan id was requested that the store has never seen."""


class MissingApiKey(TubescanError):
    """Live or record mode without the API key environment variable."""
