"""Role registry and the pausable circuit breaker.

Four roles: ISSUER and PEER_REVIEWER gate protocol entry points, PAUSER may
flip the global pause switch, ADMIN administers grants. The deployer holds
ADMIN and PAUSER from genesis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ProtocolError
from .hashing import Address, ZERO_ADDRESS
from .runtime import TxFrame


class Role(str, Enum):
    ISSUER = "ISSUER"
    PEER_REVIEWER = "PEER_REVIEWER"
    PAUSER = "PAUSER"
    ADMIN = "ADMIN"


@dataclass
class AccessState:
    # insertion-ordered member sets, keyed by role name
    members: dict[str, dict[Address, bool]] = field(
        default_factory=lambda: {r.value: {} for r in Role}
    )
    paused: bool = False

    def is_member(self, role: Role, who: Address) -> bool:
        return who in self.members[role.value]


def coerce_role(value: str) -> Role:
    try:
        return Role(value)
    except ValueError:
        raise ProtocolError("invalid_args", f"unknown role {value!r}") from None


def require_role(st: AccessState, role: Role, who: Address) -> None:
    if not st.is_member(role, who):
        raise ProtocolError("missing_role", f"sender lacks {role.value}")


def has_role(st: AccessState, role: Role, who: Address) -> bool:
    if who == ZERO_ADDRESS:
        return False
    return st.is_member(role, who)


def grant_role(st: AccessState, tx: TxFrame, role: Role, who: Address) -> None:
    require_role(st, Role.ADMIN, tx.sender)
    if who == ZERO_ADDRESS:
        raise ProtocolError("zero_address", "cannot grant to the zero address")
    st.members[role.value][who] = True
    tx.emit("RoleGranted", [("role", role.value), ("who", who), ("by", tx.sender)])


def revoke_role(st: AccessState, tx: TxFrame, role: Role, who: Address) -> None:
    require_role(st, Role.ADMIN, tx.sender)
    st.members[role.value].pop(who, None)
    tx.emit("RoleRevoked", [("role", role.value), ("who", who), ("by", tx.sender)])
    if role is Role.ADMIN and not st.members[Role.ADMIN.value]:
        tx.emit("WarnNoAdmin", [("revoked", who)])


def pause(st: AccessState, tx: TxFrame) -> None:
    require_role(st, Role.PAUSER, tx.sender)
    if st.paused:
        raise ProtocolError("already_paused")
    st.paused = True
    tx.emit("Paused", [("by", tx.sender)])


def unpause(st: AccessState, tx: TxFrame) -> None:
    require_role(st, Role.PAUSER, tx.sender)
    if not st.paused:
        raise ProtocolError("not_paused")
    st.paused = False
    tx.emit("Unpaused", [("by", tx.sender)])


def state_view(st: AccessState) -> dict:
    return {
        "roles": {role: sorted(members) for role, members in st.members.items()},
        "paused": st.paused,
    }


def state_from_view(view: dict) -> AccessState:
    return AccessState(
        members={role: {a: True for a in who} for role, who in view["roles"].items()},
        paused=bool(view["paused"]),
    )
