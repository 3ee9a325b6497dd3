"""Deterministic JSON artifacts with content checksums."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .errors import CacheIntegrityError


def fmt_float(x: float) -> str:
    """Fixed 17-significant-digit float serialization for reproducible diffs."""
    return format(float(x), ".17g")


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n").encode()


def payload_checksum(payload) -> str:
    return hashlib.sha256(canonical_json_bytes(payload)).hexdigest()


def atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def write_checked_json(path: Path, payload) -> None:
    """Write {checksum, payload} with a canonical-payload sha256."""
    doc = {"checksum": payload_checksum(payload), "payload": payload}
    atomic_write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def read_checked_json(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    payload = doc.get("payload")
    expect = doc.get("checksum")
    actual = payload_checksum(payload)
    if actual != expect:
        raise CacheIntegrityError(
            f"checksum mismatch in {path}: expected {expect}, computed {actual}"
        )
    return payload


def write_plain_json(path: Path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, sort_keys=True, indent=1) + "\n")
