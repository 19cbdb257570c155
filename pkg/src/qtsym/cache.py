"""Disk cache helpers: JSON files under a versioned directory, atomic writes.

Layout: <cache_dir>/<section>-v<format_version>/<name>.json.  Reads are safe
to run concurrently; writers go through a temp file and os.replace so a
half-written file is never observed.  Corrupt or stale entries are the
caller's concern: loaders return the raw decoded object and validation
happens at the point of use.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

from .config import get_config

FORMAT_VERSION = 1

_locks: dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()


def _lock_for(path: Path) -> threading.Lock:
    key = str(path)
    with _locks_guard:
        lock = _locks.get(key)
        if lock is None:
            lock = _locks[key] = threading.Lock()
        return lock


def section_dir(section: str) -> Path:
    return Path(get_config().cache_dir) / f"{section}-v{FORMAT_VERSION}"


def load_json(section: str, name: str):
    """Return the decoded object, or None when absent/undecodable/disabled."""
    if not get_config().disk_cache:
        return None
    path = section_dir(section) / f"{name}.json"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None


def store_json(section: str, name: str, obj) -> None:
    if not get_config().disk_cache:
        return
    directory = section_dir(section)
    path = directory / f"{name}.json"
    with _lock_for(path):
        try:
            directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(obj, fh, separators=(",", ":"))
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)
        except OSError:
            pass  # cache is best-effort; never fail the computation


def list_entries() -> list[tuple[str, str, int]]:
    """(section, name, size_bytes) for every cached file."""
    root = Path(get_config().cache_dir)
    out = []
    if not root.is_dir():
        return out
    for sub in sorted(root.iterdir()):
        if not sub.is_dir():
            continue
        for f in sorted(sub.glob("*.json")):
            out.append((sub.name, f.stem, f.stat().st_size))
    return out


def clear_disk() -> int:
    """Remove every cached file; returns the number removed."""
    root = Path(get_config().cache_dir)
    n = 0
    if not root.is_dir():
        return 0
    for sub in root.iterdir():
        if sub.is_dir():
            for f in sub.glob("*.json"):
                f.unlink()
                n += 1
    return n
