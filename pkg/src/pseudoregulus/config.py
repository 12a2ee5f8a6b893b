"""Enumeration cap shared by every brute-force routine."""

from __future__ import annotations

import os

from .errors import SizeCapExceeded

_DEFAULT_CAP = int(os.environ.get("PSEUDOREGULUS_CAP", 2**26))


def default_cap() -> int:
    return _DEFAULT_CAP


def set_default_cap(cap: int) -> None:
    global _DEFAULT_CAP
    _DEFAULT_CAP = int(cap)


def check_cap(count: int, what: str, cap: int | None = None) -> None:
    limit = default_cap() if cap is None else cap
    if count > limit:
        raise SizeCapExceeded(f"{what}: {count} exceeds enumeration cap {limit}")
