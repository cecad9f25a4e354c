"""Canonical JSON text and content hashing helpers.

Canonical form (sorted keys, compact separators, ASCII escapes) is what
gets hashed for snapshot ids, so it must never change between releases
without bumping the snapshot format version.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(obj: Any) -> str:
    """Serialize ``obj`` to deterministic, byte-stable JSON text."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_text(text: str) -> str:
    """Hex SHA-256 of UTF-8 encoded ``text``."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
