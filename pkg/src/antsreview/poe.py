"""Content-addressed store and proof-of-existence registry.

The store replaces a networked file system at desk scale: content is held
locally under its 32-byte hash. The registry binds a hash to the logical
time it was first seen; records never change afterwards, which is the whole
point of notarization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ProtocolError
from .hashing import Address, content_hash_hex, is_content_hash
from .runtime import TxFrame

DEFAULT_MAX_CONTENT_SIZE = 16 * 1024 * 1024  # 16 MiB


@dataclass
class PoERecord:
    first_seen: int
    submitter: Address


@dataclass
class PoEState:
    contents: dict[str, bytes] = field(default_factory=dict)
    records: dict[str, PoERecord] = field(default_factory=dict)
    max_content_size: int = DEFAULT_MAX_CONTENT_SIZE


def coerce_hash(value: str) -> str:
    if isinstance(value, str) and is_content_hash(value.lower()):
        return value.lower()
    raise ProtocolError("invalid_args", "content hash must be 0x-hex, 64 chars")


def put(st: PoEState, tx: TxFrame, content: bytes) -> str:
    if len(content) > st.max_content_size:
        raise ProtocolError("oversize_content", f"{len(content)} bytes exceeds max")
    h = content_hash_hex(content)
    st.contents.setdefault(h, content)
    return h


def get(st: PoEState, content_hash: str) -> bytes:
    try:
        return st.contents[content_hash]
    except KeyError:
        raise ProtocolError("not_found", content_hash) from None


def notarize(st: PoEState, tx: TxFrame, content_hash: str) -> PoERecord:
    existing = st.records.get(content_hash)
    if existing is not None:
        return existing
    record = PoERecord(first_seen=tx.now, submitter=tx.sender)
    st.records[content_hash] = record
    tx.emit(
        "PoE",
        [
            ("hash", content_hash),
            ("first_seen", str(tx.now)),
            ("submitter", tx.sender),
        ],
    )
    return record


def verify_existence(st: PoEState, content_hash: str) -> tuple[bool, int | None]:
    record = st.records.get(content_hash)
    if record is None:
        return (False, None)
    return (True, record.first_seen)


def state_view(st: PoEState) -> dict:
    # Contents are bound by their hashes, so hashes alone canonically
    # describe the store; record fields pin the notarization history.
    return {
        "stored": sorted(st.contents),
        "records": {
            h: {"first_seen": r.first_seen, "submitter": r.submitter}
            for h, r in st.records.items()
        },
        "max_content_size": st.max_content_size,
    }


def snapshot(st: PoEState) -> dict:
    view = state_view(st)
    view["contents"] = {h: data.hex() for h, data in st.contents.items()}
    del view["stored"]
    return view


def state_from_snapshot(snap: dict) -> PoEState:
    return PoEState(
        contents={h: bytes.fromhex(x) for h, x in snap["contents"].items()},
        records={
            h: PoERecord(first_seen=int(r["first_seen"]), submitter=r["submitter"])
            for h, r in snap["records"].items()
        },
        max_content_size=int(snap["max_content_size"]),
    )
