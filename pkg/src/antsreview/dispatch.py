"""Operation registry: names, argument coercion and pause gating.

Every protocol call enters through this table, both from the library API
and from scenario files, so argument handling is uniform and the set of
pause-gated operations is defined in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .access import coerce_role
from .errors import ProtocolError
from .hashing import address_from_seed, is_address
from .poe import coerce_hash


def coerce_address(value: Any) -> str:
    """Accept a 0x-address or an account seed string."""
    if isinstance(value, str):
        if is_address(value.lower()) and value.startswith("0x"):
            return value.lower()
        if not value.startswith("0x"):
            return address_from_seed(value)
    raise ProtocolError("invalid_args", f"not an address or seed: {value!r}")


def coerce_int(value: Any, what: str = "value") -> int:
    if isinstance(value, bool):
        raise ProtocolError("invalid_args", f"{what} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 16) if value.startswith("0x") else int(value)
        except ValueError:
            pass
    raise ProtocolError("invalid_args", f"{what} must be an integer")


def coerce_nat(value: Any, what: str = "value") -> int:
    n = coerce_int(value, what)
    if n < 0:
        raise ProtocolError("invalid_args", f"{what} must be nonnegative")
    return n


def coerce_address_list(value: Any) -> list[str]:
    if not isinstance(value, list):
        raise ProtocolError("invalid_args", "expected a list of addresses")
    return [coerce_address(v) for v in value]


def coerce_int_list(value: Any) -> list[int]:
    if not isinstance(value, list):
        raise ProtocolError("invalid_args", "expected a list of integers")
    return [coerce_nat(v) for v in value]


def coerce_nat_list(value: Any) -> list[int]:
    return coerce_int_list(value)


def coerce_bytes(value: Any) -> bytes:
    raise ProtocolError("invalid_args", "raw bytes cannot be coerced here")


def coerce_direction(value: Any) -> str:
    if value in ("up", "down"):
        return value
    raise ProtocolError("invalid_args", "direction must be 'up' or 'down'")


_COERCERS: dict[str, Callable[[Any], Any]] = {
    "address": coerce_address,
    "address_list": coerce_address_list,
    "amount": coerce_nat,
    "u64": coerce_nat,
    "nat": coerce_nat,
    "int": coerce_nat,
    "int_list": coerce_int_list,
    "nat_list": coerce_nat_list,
    "hash": coerce_hash,
    "role": coerce_role,
    "direction": coerce_direction,
    "scalar": coerce_nat,
    "element": coerce_nat,
    "element_list": coerce_nat_list,
}


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    default: Any = None
    required: bool = True


@dataclass(frozen=True)
class OpSpec:
    name: str
    params: tuple[Param, ...]
    gated: bool  # rejected while the circuit breaker is engaged
    mutates: bool = True


def _p(name: str, kind: str, default: Any = None, required: bool = True) -> Param:
    return Param(name=name, kind=kind, default=default, required=required)


OPS: dict[str, OpSpec] = {
    spec.name: spec
    for spec in [
        # token
        OpSpec("transfer", (_p("to", "address"), _p("amount", "amount")), gated=False),
        OpSpec("approve", (_p("spender", "address"), _p("amount", "amount")), gated=False),
        OpSpec(
            "transfer_from",
            (_p("owner", "address"), _p("to", "address"), _p("amount", "amount")),
            gated=False,
        ),
        OpSpec("faucet_drip", (), gated=True),
        # access
        OpSpec("grant_role", (_p("role", "role"), _p("who", "address")), gated=True),
        OpSpec("revoke_role", (_p("role", "role"), _p("who", "address")), gated=True),
        OpSpec("pause", (), gated=False),
        OpSpec("unpause", (), gated=False),
        OpSpec(
            "has_role",
            (_p("role", "role"), _p("who", "address")),
            gated=False,
            mutates=False,
        ),
        # poe ("content"/"content_hex" handled specially by the dispatcher)
        OpSpec("put", (), gated=True),
        OpSpec("get", (_p("hash", "hash"),), gated=False, mutates=False),
        OpSpec("notarize", (_p("hash", "hash"),), gated=True),
        OpSpec(
            "verify_existence",
            (_p("hash", "hash"),),
            gated=False,
            mutates=False,
        ),
        # bounties
        OpSpec(
            "issue_ant_review",
            (
                _p("issuers", "address_list"),
                _p("approver", "address"),
                _p("paper_hash", "hash"),
                _p("requirements_hash", "hash"),
                _p("deadline", "u64"),
            ),
            gated=True,
        ),
        OpSpec(
            "change_ant_review",
            (
                _p("id", "int"),
                _p("new_issuers", "address_list"),
                _p("new_paper_hash", "hash"),
                _p("new_requirements_hash", "hash"),
                _p("new_deadline", "u64"),
            ),
            gated=True,
        ),
        OpSpec("add_approver", (_p("id", "int"), _p("who", "address")), gated=True),
        OpSpec("remove_approver", (_p("id", "int"), _p("who", "address")), gated=True),
        OpSpec("contribute", (_p("id", "int"), _p("amount", "amount")), gated=True),
        OpSpec(
            "fulfill_ant_review",
            (_p("id", "int"), _p("review_hash", "hash")),
            gated=True,
        ),
        OpSpec(
            "update_review",
            (_p("id", "int"), _p("fulfillment_id", "int"), _p("new_hash", "hash")),
            gated=True,
        ),
        OpSpec(
            "accept_ant_review",
            (_p("id", "int"), _p("fulfillment_id", "int"), _p("amount", "amount")),
            gated=True,
        ),
        OpSpec("refund", (_p("id", "int"), _p("contribution_index", "int")), gated=True),
        OpSpec(
            "withdraw_ant_review",
            (_p("id", "int"), _p("amount", "amount")),
            gated=True,
        ),
        # confidential
        OpSpec("shield", (_p("amount", "amount"), _p("r", "scalar")), gated=True),
        OpSpec(
            "join_split",
            (
                _p("input_note_ids", "int_list"),
                _p("output_commitments", "element_list"),
                _p("output_owners", "address_list"),
                _p("randomness_balance_proof", "scalar", default=0, required=False),
            ),
            gated=True,
        ),
        OpSpec(
            "unshield",
            (_p("note_id", "int"), _p("v", "amount"), _p("r", "scalar")),
            gated=True,
        ),
        OpSpec(
            "verify_commitment",
            (_p("c", "element"), _p("v", "nat"), _p("r", "nat")),
            gated=False,
            mutates=False,
        ),
        # voting
        OpSpec("open_voting", (_p("id", "int"), _p("pool", "amount")), gated=True),
        OpSpec(
            "vote",
            (_p("id", "int"), _p("fulfillment_id", "int"), _p("direction", "direction")),
            gated=True,
        ),
        OpSpec("finalize_voting", (_p("id", "int"),), gated=True),
    ]
}

GATED_OPS = frozenset(name for name, spec in OPS.items() if spec.gated)


def coerce_args(spec: OpSpec, raw: dict[str, Any]) -> dict[str, Any]:
    if not isinstance(raw, dict):
        raise ProtocolError("invalid_args", "args must be an object")
    out: dict[str, Any] = {}
    for param in spec.params:
        if param.name in raw:
            out[param.name] = _COERCERS[param.kind](raw[param.name])
        elif param.required:
            raise ProtocolError("invalid_args", f"missing argument {param.name!r}")
        else:
            out[param.name] = param.default
    known = {p.name for p in spec.params}
    if spec.name == "put":
        known |= {"content", "content_hex"}
    extra = set(raw) - known
    if extra:
        raise ProtocolError("invalid_args", f"unexpected arguments {sorted(extra)}")
    return out
