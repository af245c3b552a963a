"""Exception hierarchy shared by every module."""

import os

DEFAULT_SIZE_CAP = 200_000


class ArborealError(Exception):
    """Base class for all errors raised by the toolkit."""


class MalformedInputError(ArborealError, ValueError):
    """Input violates a structural invariant (bad arity, unknown element, ...)."""


class UnsupportedInputError(ArborealError, ValueError):
    """Input is well formed but outside what an operation handles."""


class SizeCapError(ArborealError):
    """A carrier or formula would exceed the configured size cap."""


def size_cap(override=None):
    """Return the active carrier cap: explicit override, then FMT_SIZE_CAP, then default."""
    if override is not None:
        return int(override)
    raw = os.environ.get("FMT_SIZE_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise MalformedInputError(f"FMT_SIZE_CAP must be an integer, got {raw!r}")
    return DEFAULT_SIZE_CAP


def check_size(n, what="carrier", cap=None):
    limit = size_cap(cap)
    if n > limit:
        raise SizeCapError(f"{what} of size {n} exceeds cap {limit}")
