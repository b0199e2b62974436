"""Canonical JSON encoding and content hashing.

Every JSON artifact this package emits (documents, analytics, hierarchies,
overlays) goes through :func:`canonical_json_bytes` so that equal values
always produce equal bytes: keys sorted, no insignificant whitespace, floats
in their shortest round-trip form, UTF-8 throughout.
"""

import hashlib
import json
from typing import Any


def canonical_json_bytes(value: Any) -> bytes:
    """Serialize ``value`` to canonical UTF-8 JSON bytes.

    Raises ValueError for NaN/infinity; those must never reach serialization.
    """
    text = json.dumps(
        value,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )
    return text.encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
