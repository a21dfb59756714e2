"""Enumeration caps for the exponential brute-force operations."""

from __future__ import annotations

from .errors import TooLarge

DEFAULT_CAP = 1 << 24


def check_enumeration(required: int, cap: int | None, what: str) -> None:
    limit = DEFAULT_CAP if cap is None else cap
    if required > limit:
        raise TooLarge(required, limit, what)
