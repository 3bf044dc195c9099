"""Shared transaction-scope plumbing: events, amounts and the tx frame.

Protocol modules receive a TxFrame (who is calling, at what logical time)
and emit events into it; the environment stamps the transaction index and
appends them to the log only if the call commits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ProtocolError
from .hashing import Address

U64_MAX = 2**64 - 1
U128_MAX = 2**128 - 1


@dataclass
class Event:
    """One log entry; serialization is canonical so logs are byte-comparable."""

    tx_index: int
    name: str
    attributes: list[tuple[str, str]]

    def to_json_line(self) -> str:
        obj = {
            "tx_index": self.tx_index,
            "name": self.name,
            "attributes": [[k, v] for k, v in self.attributes],
        }
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)

    @staticmethod
    def from_obj(obj: dict) -> "Event":
        return Event(
            tx_index=int(obj["tx_index"]),
            name=str(obj["name"]),
            attributes=[(str(k), str(v)) for k, v in obj["attributes"]],
        )


@dataclass
class TxFrame:
    """Per-transaction context handed to protocol operations."""

    sender: Address
    now: int
    events: list[tuple[str, list[tuple[str, str]]]] = field(default_factory=list)

    def emit(self, name: str, attributes: list[tuple[str, str]]) -> None:
        self.events.append((name, attributes))


def checked_amount(value: int, what: str = "amount") -> int:
    """Validate a token amount fits the unsigned 128-bit range."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProtocolError("invalid_args", f"{what} must be an integer")
    if value < 0 or value > U128_MAX:
        raise ProtocolError("overflow", f"{what} out of u128 range")
    return value


def checked_u64(value: int, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProtocolError("invalid_args", f"{what} must be an integer")
    if value < 0 or value > U64_MAX:
        raise ProtocolError("overflow", f"{what} out of u64 range")
    return value
