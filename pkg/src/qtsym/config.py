"""Runtime configuration: degree bound, cache location, verification defaults.

The configuration is a small immutable record.  A module-level instance holds
the active settings; tests and the CLI replace it wholesale via set_config()
or the configured() context manager.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path

DEFAULT_MAX_DEGREE = 8


def default_cache_dir() -> Path:
    env = os.environ.get("QTSYM_CACHE_DIR")
    if env:
        return Path(env).expanduser()
    xdg = os.environ.get("XDG_CACHE_HOME")
    base = Path(xdg).expanduser() if xdg else Path.home() / ".cache"
    return base / "qtsym"


@dataclass(frozen=True)
class Config:
    max_degree: int = DEFAULT_MAX_DEGREE
    cache_dir: Path = None  # type: ignore[assignment]
    disk_cache: bool = True
    mode: str = "exact"  # default verification mode: "exact" or "evaluated"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.cache_dir is None:
            object.__setattr__(self, "cache_dir", default_cache_dir())
        if self.max_degree < 1:
            raise ValueError("max_degree must be positive")
        if self.mode not in ("exact", "evaluated"):
            raise ValueError(f"unknown mode {self.mode!r}")


_lock = threading.Lock()
_current = Config()


def get_config() -> Config:
    return _current


def set_config(config: Config) -> Config:
    global _current
    with _lock:
        previous = _current
        _current = config
    return previous


def update_config(**changes) -> Config:
    return set_config(replace(get_config(), **changes))


@contextmanager
def configured(**changes):
    previous = update_config(**changes)
    try:
        yield get_config()
    finally:
        set_config(previous)


def check_degree(needed: int, what: str = "computation") -> None:
    from .errors import DegreeBoundError

    bound = get_config().max_degree
    if needed > bound:
        raise DegreeBoundError(needed, bound, what)
