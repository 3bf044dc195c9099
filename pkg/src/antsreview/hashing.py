"""Engine-wide hashing and address primitives.

One hash function (SHA-256) is used everywhere a 32-byte digest is needed:
content addressing, proof-of-existence records, account derivation and
state digests. Pinning a single function keeps every record bit-stable
across runs.
"""

from __future__ import annotations

import hashlib

# Addresses are 20-byte identifiers rendered as 0x-prefixed lowercase hex.
Address = str

ADDRESS_BYTES = 20
ZERO_ADDRESS: Address = "0x" + "00" * ADDRESS_BYTES


def engine_hash(data: bytes) -> bytes:
    """32-byte digest of raw bytes under the engine's standard hash."""
    return hashlib.sha256(data).digest()


def content_hash_hex(data: bytes) -> str:
    """0x-hex (64 hex chars) content hash of raw bytes."""
    return "0x" + engine_hash(data).hex()


def address_from_seed(seed: bytes | str) -> Address:
    """Derive an account address: first 20 bytes of the seed's digest."""
    if isinstance(seed, str):
        seed = seed.encode("utf-8")
    return "0x" + engine_hash(seed)[:ADDRESS_BYTES].hex()


def is_address(value: str) -> bool:
    if not isinstance(value, str) or len(value) != 2 + 2 * ADDRESS_BYTES:
        return False
    if not value.startswith("0x"):
        return False
    body = value[2:]
    return all(c in "0123456789abcdef" for c in body)


def is_content_hash(value: str) -> bool:
    if not isinstance(value, str) or len(value) != 66 or not value.startswith("0x"):
        return False
    return all(c in "0123456789abcdef" for c in value[2:])
