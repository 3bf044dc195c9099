"""Protocol error type.

Every rejected call raises ProtocolError with a short stable code; the code
is what ends up in the transaction log's Error event, so codes are part of
the deterministic output and must never depend on runtime details.
"""

from __future__ import annotations


class ProtocolError(Exception):
    """A protocol-level rejection: the transaction reverts atomically."""

    def __init__(self, code: str, detail: str = ""):
        self.code = code
        self.detail = detail
        super().__init__(code if not detail else f"{code}: {detail}")
