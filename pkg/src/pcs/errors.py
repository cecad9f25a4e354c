"""Exception types shared across the package.

Every failure the package raises on purpose derives from :class:`PcsError`,
so callers (CLI, HTTP service) can map errors to exit codes / status codes
with a single isinstance walk.
"""

from __future__ import annotations


class PcsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidRecordError(PcsError):
    """A citation record violates a hard invariant (self-citation, bad year)."""


class EmptyTableError(PcsError):
    """The citation table has no dated edges, so no spectrum can be computed."""


class NoSignalError(PcsError):
    """Every year of the spectrum is empty; the query should be broadened."""


class InconsistentInputError(PcsError):
    """Inputs contradict each other (e.g. a 'citer' that does not cite the target)."""


class QueryError(PcsError):
    """Base class for query parsing and validation failures."""


class QuerySyntaxError(QueryError):
    """Raw query text is not valid JSON."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class UnsupportedOperatorError(QueryError):
    """The query uses a combinator or comparison operator outside the supported set."""


class UnknownFieldError(QueryError):
    """A criterion names a field that is not in the bundled field catalog."""

    def __init__(self, field: str, suggestions: list[str] | None = None):
        self.field = field
        self.suggestions = suggestions or []
        hint = f" (did you mean: {', '.join(self.suggestions)}?)" if self.suggestions else ""
        super().__init__(f"unknown field {field!r}{hint}")


class EmptyQueryError(QueryError):
    """Keyword query is empty after trimming."""


class BoundsError(QueryError):
    """Pagination parameters exceed provider limits."""


class TransportError(PcsError):
    """The provider could not be reached, or kept failing after retries."""


class QueryRejectedError(PcsError):
    """The provider rejected the request (HTTP 4xx); carries the provider message."""


class NotFoundError(PcsError):
    """A referenced patent id is unknown to the provider."""


class ReplayMismatchError(PcsError):
    """A replay snapshot was recorded for a different query than the one given."""


class StoreError(PcsError):
    """Base class for snapshot store failures."""


class CacheMissError(StoreError):
    """No snapshot stored under the requested id."""


class AmbiguousIdError(StoreError):
    """A snapshot id prefix matches more than one stored snapshot."""


class CorruptSnapshotError(StoreError):
    """Stored snapshot content does not match its recorded checksums."""


class IntegrityError(StoreError):
    """Snapshot id does not match the hash of its own query text."""


class PersistenceError(StoreError):
    """The store could not be written (disk, permissions)."""
