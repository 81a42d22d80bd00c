"""Size guards shared by the exhaustive checkers.

Every operation whose cost explodes with input size calls :func:`require`
with a named limit before doing any work.  Setting ``QMODAL_GUARD_OVERRIDE=1``
in the environment lifts all guards, at your own runtime's risk.
"""

from __future__ import annotations

import os


class GuardExceeded(Exception):
    """Raised when an operation would exceed its documented size guard."""

    def __init__(self, guard: str, detail: str):
        self.guard = guard
        self.detail = detail
        super().__init__(
            f"guard '{guard}' exceeded: {detail}"
            " (set QMODAL_GUARD_OVERRIDE=1 to lift size guards)"
        )


def overridden() -> bool:
    return os.environ.get("QMODAL_GUARD_OVERRIDE") == "1"


def require(guard: str, within_limit: bool, detail: str) -> None:
    """Raise :class:`GuardExceeded` unless the limit holds or is overridden."""
    if within_limit or overridden():
        return
    raise GuardExceeded(guard, detail)
