"""Deterministic execution environment.

Owns all protocol state, logical time and the append-only event log. Every
protocol call runs as one transaction: it either commits all of its state
changes and events, or reverts completely leaving a single Error event.
Replaying the same calls therefore always produces byte-identical logs and
state digests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import access as access_mod
from . import bounties as bounty_mod
from . import confidential as conf_mod
from . import poe as poe_mod
from . import token as token_mod
from . import voting as voting_mod
from .access import AccessState, Role
from .bounties import BountyState
from .confidential import ConfidentialState, GroupParams, DEFAULT_PARAMS
from .dispatch import OPS, coerce_address, coerce_args
from .errors import ProtocolError
from .hashing import Address, ZERO_ADDRESS, address_from_seed, engine_hash
from .poe import PoEState
from .runtime import Event, TxFrame, U64_MAX
from .token import ESCROW_ADDRESS, TokenState

DEPLOYER_SEED = "deployer"
ESCROW_SEED = "escrow"
DEPLOYER_ADDRESS: Address = address_from_seed(DEPLOYER_SEED)

SNAPSHOT_VERSION = 1


@dataclass
class ExecResult:
    ok: bool
    tx_index: int
    value: Any = None
    error: str | None = None
    events: list[Event] = field(default_factory=list)


class Environment:
    """One simulated ledger: accounts, logical clock, state and event log."""

    def __init__(
        self,
        start_time: int = 0,
        params: GroupParams = DEFAULT_PARAMS,
        drip_amount: int | None = None,
        drip_cooldown: int | None = None,
        max_content_size: int | None = None,
    ):
        params.validate()
        self.now: int = start_time
        self.tx_index: int = 0
        self.events: list[Event] = []
        self.accounts: dict[Address, bytes] = {}
        self.token = TokenState()
        if drip_amount is not None:
            self.token.drip_amount = drip_amount
        if drip_cooldown is not None:
            self.token.drip_cooldown = drip_cooldown
        self.access = AccessState()
        self.poe = PoEState()
        if max_content_size is not None:
            self.poe.max_content_size = max_content_size
        self.bounties = BountyState()
        self.confidential = ConfidentialState(params=params)
        self.voting = voting_mod.VotingState()
        # genesis: deployer holds ADMIN and PAUSER; escrow is engine-owned
        self._register(DEPLOYER_SEED)
        self._register(ESCROW_SEED)
        self.access.members[Role.ADMIN.value][DEPLOYER_ADDRESS] = True
        self.access.members[Role.PAUSER.value][DEPLOYER_ADDRESS] = True

    # -- accounts and time ------------------------------------------------

    def _register(self, seed: bytes | str) -> Address:
        if isinstance(seed, str):
            seed = seed.encode("utf-8")
        addr = address_from_seed(seed)
        if addr == ZERO_ADDRESS:
            raise ProtocolError("zero_address", "seed derives the zero address")
        existing = self.accounts.get(addr)
        if existing is not None and existing != seed:
            raise ProtocolError("address_collision", addr)
        self.accounts[addr] = seed
        return addr

    def create_account(self, seed: bytes | str) -> Address:
        return self._register(seed)

    def advance_time(self, delta: int) -> int:
        if not isinstance(delta, int) or isinstance(delta, bool) or delta < 0:
            raise ProtocolError("invalid_args", "delta must be a nonnegative integer")
        if self.now + delta > U64_MAX:
            raise ProtocolError("overflow", "timestamp past u64 range")
        self.now += delta
        return self.now

    # -- transaction loop --------------------------------------------------

    def execute(self, sender: Address | str, op: str, args: dict | None = None) -> ExecResult:
        tx_index = self.tx_index
        self.tx_index += 1
        args = args if args is not None else {}

        def reject(code: str, sender_repr: str) -> ExecResult:
            event = Event(
                tx_index,
                "Error",
                [("op", str(op)), ("sender", sender_repr), ("reason", code)],
            )
            self.events.append(event)
            return ExecResult(ok=False, tx_index=tx_index, error=code, events=[event])

        try:
            sender_addr = coerce_address(sender)
        except ProtocolError:
            return reject("unknown_sender", str(sender))
        if sender_addr not in self.accounts:
            return reject("unknown_sender", sender_addr)
        if sender_addr == ESCROW_ADDRESS:
            return reject("reserved_account", sender_addr)

        spec = OPS.get(op)
        if spec is None:
            return reject("unknown_call", sender_addr)
        if spec.gated and self.access.paused:
            return reject("paused", sender_addr)

        tx = TxFrame(sender=sender_addr, now=self.now)
        try:
            coerced = coerce_args(spec, args)
            if op == "put":
                coerced["content"] = self._extract_content(args)
            value = self._apply(op, tx, coerced)
        except ProtocolError as exc:
            return reject(exc.code, sender_addr)

        committed = [Event(tx_index, name, attrs) for name, attrs in tx.events]
        self.events.extend(committed)
        return ExecResult(ok=True, tx_index=tx_index, value=value, events=committed)

    @staticmethod
    def _extract_content(args: dict) -> bytes:
        if "content" in args:
            raw = args["content"]
            if isinstance(raw, bytes):
                return raw
            if isinstance(raw, str):
                return raw.encode("utf-8")
        elif "content_hex" in args:
            raw = args["content_hex"]
            if isinstance(raw, str):
                try:
                    return bytes.fromhex(raw.removeprefix("0x"))
                except ValueError:
                    raise ProtocolError("invalid_args", "bad content_hex") from None
        raise ProtocolError("invalid_args", "put needs 'content' or 'content_hex'")

    def _apply(self, op: str, tx: TxFrame, a: dict[str, Any]) -> Any:
        if op == "transfer":
            return token_mod.transfer(self.token, tx, a["to"], a["amount"])
        if op == "approve":
            return token_mod.approve(self.token, tx, a["spender"], a["amount"])
        if op == "transfer_from":
            return token_mod.transfer_from(self.token, tx, a["owner"], a["to"], a["amount"])
        if op == "faucet_drip":
            return token_mod.faucet_drip(self.token, tx)
        if op == "grant_role":
            return access_mod.grant_role(self.access, tx, a["role"], a["who"])
        if op == "revoke_role":
            return access_mod.revoke_role(self.access, tx, a["role"], a["who"])
        if op == "pause":
            return access_mod.pause(self.access, tx)
        if op == "unpause":
            return access_mod.unpause(self.access, tx)
        if op == "has_role":
            return access_mod.has_role(self.access, a["role"], a["who"])
        if op == "put":
            return poe_mod.put(self.poe, tx, a["content"])
        if op == "get":
            return poe_mod.get(self.poe, a["hash"])
        if op == "notarize":
            record = poe_mod.notarize(self.poe, tx, a["hash"])
            return (record.first_seen, record.submitter)
        if op == "verify_existence":
            return poe_mod.verify_existence(self.poe, a["hash"])
        if op == "issue_ant_review":
            return bounty_mod.issue_ant_review(
                self.bounties, self.access, self.poe, tx,
                a["issuers"], a["approver"], a["paper_hash"],
                a["requirements_hash"], a["deadline"],
            )
        if op == "change_ant_review":
            return bounty_mod.change_ant_review(
                self.bounties, self.poe, tx, a["id"], a["new_issuers"],
                a["new_paper_hash"], a["new_requirements_hash"], a["new_deadline"],
            )
        if op == "add_approver":
            return bounty_mod.add_approver(self.bounties, tx, a["id"], a["who"])
        if op == "remove_approver":
            return bounty_mod.remove_approver(self.bounties, tx, a["id"], a["who"])
        if op == "contribute":
            return bounty_mod.contribute(self.bounties, self.token, tx, a["id"], a["amount"])
        if op == "fulfill_ant_review":
            return bounty_mod.fulfill_ant_review(
                self.bounties, self.access, self.poe, tx, a["id"], a["review_hash"]
            )
        if op == "update_review":
            return bounty_mod.update_review(
                self.bounties, self.poe, tx, a["id"], a["fulfillment_id"], a["new_hash"]
            )
        if op == "accept_ant_review":
            return bounty_mod.accept_ant_review(
                self.bounties, self.token, tx, a["id"], a["fulfillment_id"], a["amount"]
            )
        if op == "refund":
            return bounty_mod.refund(
                self.bounties, self.token, tx, a["id"], a["contribution_index"]
            )
        if op == "withdraw_ant_review":
            return bounty_mod.withdraw_ant_review(
                self.bounties, self.token, tx, a["id"], a["amount"]
            )
        if op == "shield":
            note = conf_mod.shield(self.confidential, self.token, tx, a["amount"], a["r"])
            return note.note_id
        if op == "join_split":
            notes = conf_mod.join_split(
                self.confidential, tx, a["input_note_ids"],
                a["output_commitments"], a["output_owners"],
                a["randomness_balance_proof"],
            )
            return [n.note_id for n in notes]
        if op == "unshield":
            return conf_mod.unshield(
                self.confidential, self.token, tx, a["note_id"], a["v"], a["r"]
            )
        if op == "verify_commitment":
            return conf_mod.verify_commitment(
                self.confidential.params, a["c"], a["v"], a["r"]
            )
        if op == "open_voting":
            return voting_mod.open_voting(self.voting, self.bounties, tx, a["id"], a["pool"])
        if op == "vote":
            return voting_mod.vote(
                self.voting, self.bounties, tx, a["id"], a["fulfillment_id"], a["direction"]
            )
        if op == "finalize_voting":
            return voting_mod.finalize_voting(
                self.voting, self.bounties, self.token, tx, a["id"]
            )
        raise ProtocolError("unknown_call", op)

    # -- canonical state ---------------------------------------------------

    def state_view(self) -> dict:
        return {
            "now": self.now,
            "accounts": {a: seed.hex() for a, seed in self.accounts.items()},
            "token": token_mod.state_view(self.token),
            "access": access_mod.state_view(self.access),
            "poe": poe_mod.state_view(self.poe),
            "antsreview": bounty_mod.state_view(self.bounties),
            "confidential": conf_mod.state_view(self.confidential),
            "voting": voting_mod.state_view(self.voting),
        }

    def state_digest(self) -> bytes:
        canonical = json.dumps(
            self.state_view(), sort_keys=True, separators=(",", ":"), ensure_ascii=True
        )
        return engine_hash(canonical.encode("utf-8"))

    def state_digest_hex(self) -> str:
        return "0x" + self.state_digest().hex()

    # -- snapshots -----------------------------------------------------------

    def snapshot(self) -> dict:
        view = self.state_view()
        view["poe"] = poe_mod.snapshot(self.poe)
        return {
            "version": SNAPSHOT_VERSION,
            "tx_index": self.tx_index,
            "events": [
                {
                    "tx_index": e.tx_index,
                    "name": e.name,
                    "attributes": [[k, v] for k, v in e.attributes],
                }
                for e in self.events
            ],
            "state": view,
        }

    @classmethod
    def from_snapshot(cls, snap: dict) -> "Environment":
        if snap.get("version") != SNAPSHOT_VERSION:
            raise ProtocolError("invalid_args", "unsupported snapshot version")
        state = snap["state"]
        env = cls.__new__(cls)
        env.now = int(state["now"])
        env.tx_index = int(snap["tx_index"])
        env.events = [Event.from_obj(e) for e in snap["events"]]
        env.accounts = {a: bytes.fromhex(s) for a, s in state["accounts"].items()}
        env.token = token_mod.state_from_view(state["token"])
        env.access = access_mod.state_from_view(state["access"])
        env.poe = poe_mod.state_from_snapshot(state["poe"])
        env.bounties = bounty_mod.state_from_view(state["antsreview"])
        env.confidential = conf_mod.state_from_view(state["confidential"])
        env.voting = voting_mod.state_from_view(state["voting"])
        return env

    def save_state(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.snapshot(), fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")

    @classmethod
    def load_state(cls, path: str) -> "Environment":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_snapshot(json.load(fh))
