"""Content-addressed on-disk store for recorded retrievals.

Layout per snapshot::

    <root>/<id>/meta.json          checksums, query text, provenance
    <root>/<id>/pages/<n>.json     raw wire responses, 1-based page numbers
    <root>/<id>/normalized.json    canonical serialization of the parsed result

The id is the SHA-256 of the snapshot's canonical query text, so it doubles
as cache key and integrity check. Writes stage into a hidden directory and
rename into place; readers never observe partial snapshots.
"""

from __future__ import annotations

import json
import os
import shutil
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .canon import sha256_text
from .errors import (
    AmbiguousIdError,
    CacheMissError,
    CorruptSnapshotError,
    IntegrityError,
    PersistenceError,
)

FORMAT_VERSION = 1
_STAGING = ".staging"
_TRASH = ".trash"


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Snapshot:
    """A frozen retrieval: raw pages plus their normalized parse."""

    id: str
    query_text: str
    pages: tuple[str, ...]
    normalized: str
    created_at: str
    endpoint: str
    totals: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @classmethod
    def create(
        cls,
        query_text: str,
        pages: list[str] | tuple[str, ...],
        normalized: str,
        endpoint: str,
        created_at: str | None = None,
        totals: dict | None = None,
    ) -> "Snapshot":
        return cls(
            id=sha256_text(query_text),
            query_text=query_text,
            pages=tuple(pages),
            normalized=normalized,
            created_at=created_at or utc_now_iso(),
            endpoint=endpoint,
            totals=dict(totals or {}),
        )

    def meta(self) -> dict:
        return {
            "format_version": self.format_version,
            "id": self.id,
            "created_at": self.created_at,
            "endpoint": self.endpoint,
            "query_text": self.query_text,
            "page_count": len(self.pages),
            "page_sha256": [sha256_text(page) for page in self.pages],
            "normalized_sha256": sha256_text(self.normalized),
            "totals": self.totals,
        }


def _read_snapshot_dir(path: Path) -> Snapshot:
    meta_path = path / "meta.json"
    if not meta_path.is_file():
        raise CacheMissError(f"no snapshot at {path}")
    try:
        meta = json.loads(meta_path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptSnapshotError(f"unreadable meta.json in {path}: {exc}") from exc

    if meta.get("format_version") != FORMAT_VERSION:
        raise CorruptSnapshotError(
            f"snapshot {path.name} has format_version {meta.get('format_version')}, "
            f"this build reads {FORMAT_VERSION}"
        )
    query_text = meta["query_text"]
    if sha256_text(query_text) != meta["id"]:
        raise CorruptSnapshotError(f"snapshot {path.name}: id does not match query_text hash")

    pages: list[str] = []
    for n, expected in enumerate(meta["page_sha256"], start=1):
        page_path = path / "pages" / f"{n}.json"
        try:
            # byte-exact read; text mode would translate newlines and break hashes
            text = page_path.read_bytes().decode("utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise CorruptSnapshotError(f"snapshot {path.name}: unreadable page file {page_path.name}: {exc}") from exc
        if sha256_text(text) != expected:
            raise CorruptSnapshotError(f"snapshot {path.name}: checksum mismatch in pages/{n}.json")
        pages.append(text)

    normalized_path = path / "normalized.json"
    try:
        normalized = normalized_path.read_bytes().decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CorruptSnapshotError(f"snapshot {path.name}: missing normalized.json") from exc
    if sha256_text(normalized) != meta["normalized_sha256"]:
        raise CorruptSnapshotError(f"snapshot {path.name}: checksum mismatch in normalized.json")

    return Snapshot(
        id=meta["id"],
        query_text=query_text,
        pages=tuple(pages),
        normalized=normalized,
        created_at=meta["created_at"],
        endpoint=meta.get("endpoint", ""),
        totals=meta.get("totals", {}),
        format_version=meta["format_version"],
    )


def load_snapshot_dir(path: str | Path) -> Snapshot:
    """Load and verify a snapshot directly from a directory path."""
    return _read_snapshot_dir(Path(path))


class SnapshotStore:
    """Directory of snapshots addressed by query-text hash."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _dir_for(self, snapshot_id: str) -> Path:
        return self.root / snapshot_id

    def put(self, snapshot: Snapshot) -> str:
        """Atomically persist a snapshot; idempotent for identical content."""
        if sha256_text(snapshot.query_text) != snapshot.id:
            raise IntegrityError("snapshot id does not match the hash of its query text")
        target = self._dir_for(snapshot.id)
        meta = snapshot.meta()
        if target.exists():
            try:
                existing = json.loads((target / "meta.json").read_text("utf-8"))
            except (OSError, json.JSONDecodeError):
                existing = None
            if (
                existing is not None
                and existing.get("page_sha256") == meta["page_sha256"]
                and existing.get("normalized_sha256") == meta["normalized_sha256"]
            ):
                return snapshot.id

        staging = self.root / _STAGING / uuid.uuid4().hex
        try:
            (staging / "pages").mkdir(parents=True)
            (staging / "meta.json").write_text(
                json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            for n, page in enumerate(snapshot.pages, start=1):
                (staging / "pages" / f"{n}.json").write_bytes(page.encode("utf-8"))
            (staging / "normalized.json").write_bytes(snapshot.normalized.encode("utf-8"))
            if target.exists():
                trash = self.root / _TRASH / uuid.uuid4().hex
                trash.parent.mkdir(parents=True, exist_ok=True)
                os.replace(target, trash)
                os.replace(staging, target)
                shutil.rmtree(trash, ignore_errors=True)
            else:
                os.replace(staging, target)
        except OSError as exc:
            shutil.rmtree(staging, ignore_errors=True)
            raise PersistenceError(f"could not write snapshot {snapshot.id}: {exc}") from exc
        return snapshot.id

    def get(self, snapshot_id: str) -> Snapshot:
        """Load a snapshot, verifying every checksum before returning it."""
        path = self._dir_for(snapshot_id)
        if not path.is_dir():
            raise CacheMissError(f"no snapshot stored under id {snapshot_id}")
        snapshot = _read_snapshot_dir(path)
        if snapshot.id != snapshot_id:
            raise CorruptSnapshotError(
                f"snapshot directory {snapshot_id} contains meta for id {snapshot.id}"
            )
        return snapshot

    def list(self) -> list[dict]:
        """Summaries of stored snapshots, newest first (no page verification)."""
        if not self.root.is_dir():
            return []
        summaries = []
        for entry in sorted(self.root.iterdir()):
            if not entry.is_dir() or entry.name.startswith("."):
                continue
            try:
                meta = json.loads((entry / "meta.json").read_text("utf-8"))
            except (OSError, json.JSONDecodeError):
                continue
            summaries.append(
                {
                    "id": meta.get("id", entry.name),
                    "created_at": meta.get("created_at", ""),
                    "endpoint": meta.get("endpoint", ""),
                    "page_count": meta.get("page_count", 0),
                    "totals": meta.get("totals", {}),
                    "query_text": meta.get("query_text", ""),
                }
            )
        summaries.sort(key=lambda s: (s["created_at"], s["id"]), reverse=True)
        return summaries

    def resolve(self, ref: str) -> str:
        """Expand an id prefix to a full snapshot id."""
        if (self.root / ref / "meta.json").is_file():
            return ref
        if not self.root.is_dir():
            raise CacheMissError(f"no snapshot matching {ref!r} (store {self.root} is empty)")
        matches = [
            entry.name
            for entry in self.root.iterdir()
            if entry.is_dir() and not entry.name.startswith(".") and entry.name.startswith(ref)
        ]
        if not matches:
            raise CacheMissError(f"no snapshot matching {ref!r}")
        if len(matches) > 1:
            raise AmbiguousIdError(f"id prefix {ref!r} matches {len(matches)} snapshots")
        return matches[0]


def resolve_snapshot(ref: str, store: SnapshotStore | None = None) -> Snapshot:
    """Resolve a snapshot reference that may be a directory path, id, or id prefix."""
    path = Path(ref)
    if path.is_dir() and (path / "meta.json").is_file():
        return load_snapshot_dir(path)
    if store is None:
        raise CacheMissError(f"{ref!r} is not a snapshot directory and no store was given")
    return store.get(store.resolve(ref))
