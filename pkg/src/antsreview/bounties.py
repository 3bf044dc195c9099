"""Bounty lifecycle: issue, fund, fulfill, accept, refund, withdraw.

Each bounty escrows ANTS against peer reviews of one paper. Reviews are
submitted as content hashes before the deadline; an approver pays rewards
out of the escrowed balance. After the deadline, contributors can be made
whole if no review ever arrived, and issuers can sweep residual balance.

Conflict-of-interest rule: an address never appears both as a reviewer and
as an issuer/approver of the same bounty. The check runs on every edge that
could create the overlap (fulfill, change, add_approver), not just fulfill.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import poe as poe_mod
from . import token as token_mod
from .access import AccessState, Role, require_role
from .errors import ProtocolError
from .hashing import Address, ZERO_ADDRESS
from .poe import PoEState
from .runtime import TxFrame, checked_amount, checked_u64
from .token import TokenState


@dataclass
class Contribution:
    contributor: Address
    amount: int
    refunded: bool = False


@dataclass
class Fulfillment:
    reviewer: Address
    review_hashes: list[tuple[str, int]]  # (content hash, submitted at)
    accepted: bool = False
    paid: int = 0


@dataclass
class AntReview:
    id: int
    issuers: list[Address]  # ordered, deduplicated, non-empty
    approvers: dict[Address, bool] = field(default_factory=dict)
    paper_hash: str = ""
    requirements_hash: str = ""
    deadline: int = 0
    balance: int = 0
    contributions: list[Contribution] = field(default_factory=list)
    fulfillments: list[Fulfillment] = field(default_factory=list)
    total_paid: int = 0
    total_withdrawn: int = 0

    def is_issuer(self, who: Address) -> bool:
        return who in self.issuers

    def is_approver(self, who: Address) -> bool:
        return who in self.approvers

    def reviewers(self) -> set[Address]:
        return {f.reviewer for f in self.fulfillments}


@dataclass
class BountyState:
    items: dict[int, AntReview] = field(default_factory=dict)
    next_id: int = 0

    def require(self, antreview_id: int) -> AntReview:
        item = self.items.get(antreview_id)
        if item is None:
            raise ProtocolError("unknown_id", f"no AntReview {antreview_id}")
        return item


def _dedup_issuers(issuers: list[Address]) -> list[Address]:
    if not issuers:
        raise ProtocolError("empty_issuers")
    seen: dict[Address, bool] = {}
    for a in issuers:
        if a == ZERO_ADDRESS:
            raise ProtocolError("zero_address", "issuer is the zero address")
        seen[a] = True
    return list(seen)


def issue_ant_review(
    st: BountyState,
    acl: AccessState,
    poe: PoEState,
    tx: TxFrame,
    issuers: list[Address],
    approver: Address,
    paper_hash: str,
    requirements_hash: str,
    deadline: int,
) -> int:
    require_role(acl, Role.ISSUER, tx.sender)
    issuers = _dedup_issuers(issuers)
    if tx.sender not in issuers:
        raise ProtocolError("sender_not_issuer", "sender must be among the issuers")
    if approver == ZERO_ADDRESS:
        raise ProtocolError("zero_address", "approver is the zero address")
    deadline = checked_u64(deadline, "deadline")
    if deadline <= tx.now:
        raise ProtocolError("past_deadline", "deadline must be strictly in the future")

    antreview_id = st.next_id
    item = AntReview(
        id=antreview_id,
        issuers=issuers,
        approvers={approver: True},
        paper_hash=paper_hash,
        requirements_hash=requirements_hash,
        deadline=deadline,
    )
    st.next_id += 1
    st.items[antreview_id] = item
    poe_mod.notarize(poe, tx, paper_hash)
    poe_mod.notarize(poe, tx, requirements_hash)
    tx.emit(
        "AntReviewIssued",
        [
            ("id", str(antreview_id)),
            ("issuers", ",".join(issuers)),
            ("approver", approver),
            ("paper_hash", paper_hash),
            ("requirements_hash", requirements_hash),
            ("deadline", str(deadline)),
        ],
    )
    return antreview_id


def change_ant_review(
    st: BountyState,
    poe: PoEState,
    tx: TxFrame,
    antreview_id: int,
    new_issuers: list[Address],
    new_paper_hash: str,
    new_requirements_hash: str,
    new_deadline: int,
) -> None:
    item = st.require(antreview_id)
    if not item.is_issuer(tx.sender):
        raise ProtocolError("not_issuer")
    new_issuers = _dedup_issuers(new_issuers)
    new_deadline = checked_u64(new_deadline, "deadline")
    overlap = set(new_issuers) & item.reviewers()
    if overlap:
        raise ProtocolError("conflict_of_interest", "issuer already reviewed")
    item.issuers = new_issuers
    item.paper_hash = new_paper_hash
    item.requirements_hash = new_requirements_hash
    item.deadline = new_deadline
    poe_mod.notarize(poe, tx, new_paper_hash)
    poe_mod.notarize(poe, tx, new_requirements_hash)
    tx.emit(
        "AntReviewChanged",
        [
            ("id", str(antreview_id)),
            ("issuers", ",".join(new_issuers)),
            ("paper_hash", new_paper_hash),
            ("requirements_hash", new_requirements_hash),
            ("deadline", str(new_deadline)),
        ],
    )


def add_approver(
    st: BountyState, tx: TxFrame, antreview_id: int, who: Address
) -> None:
    item = st.require(antreview_id)
    if not item.is_issuer(tx.sender):
        raise ProtocolError("not_issuer")
    if who == ZERO_ADDRESS:
        raise ProtocolError("zero_address", "approver is the zero address")
    if who in item.reviewers():
        raise ProtocolError("conflict_of_interest", "approver already reviewed")
    item.approvers[who] = True
    tx.emit("ApproverAdded", [("id", str(antreview_id)), ("who", who)])


def remove_approver(
    st: BountyState, tx: TxFrame, antreview_id: int, who: Address
) -> None:
    item = st.require(antreview_id)
    if not item.is_issuer(tx.sender):
        raise ProtocolError("not_issuer")
    item.approvers.pop(who, None)
    tx.emit("ApproverRemoved", [("id", str(antreview_id)), ("who", who)])
    if not item.approvers and any(not f.accepted for f in item.fulfillments):
        tx.emit("WarnNoApprover", [("id", str(antreview_id))])


def contribute(
    st: BountyState,
    tokens: TokenState,
    tx: TxFrame,
    antreview_id: int,
    amount: int,
) -> None:
    item = st.require(antreview_id)
    amount = checked_amount(amount)
    if amount == 0:
        raise ProtocolError("zero_amount")
    if tx.now >= item.deadline:
        raise ProtocolError("deadline_passed")
    token_mod.pull_to_escrow(tokens, tx, tx.sender, amount)
    item.contributions.append(Contribution(contributor=tx.sender, amount=amount))
    item.balance += amount
    tx.emit(
        "Contributed",
        [
            ("id", str(antreview_id)),
            ("contributor", tx.sender),
            ("amount", str(amount)),
            ("contribution_index", str(len(item.contributions) - 1)),
        ],
    )


def fulfill_ant_review(
    st: BountyState,
    acl: AccessState,
    poe: PoEState,
    tx: TxFrame,
    antreview_id: int,
    review_hash: str,
) -> int:
    item = st.require(antreview_id)
    require_role(acl, Role.PEER_REVIEWER, tx.sender)
    if tx.now >= item.deadline:
        raise ProtocolError("deadline_passed")
    if item.is_issuer(tx.sender) or item.is_approver(tx.sender):
        raise ProtocolError("conflict_of_interest", "issuers and approvers cannot review")
    fulfillment_id = len(item.fulfillments)
    item.fulfillments.append(
        Fulfillment(reviewer=tx.sender, review_hashes=[(review_hash, tx.now)])
    )
    poe_mod.notarize(poe, tx, review_hash)
    tx.emit(
        "Fulfilled",
        [
            ("id", str(antreview_id)),
            ("fulfillment_id", str(fulfillment_id)),
            ("reviewer", tx.sender),
            ("review_hash", review_hash),
        ],
    )
    return fulfillment_id


def _require_fulfillment(item: AntReview, fulfillment_id: int) -> Fulfillment:
    if not 0 <= fulfillment_id < len(item.fulfillments):
        raise ProtocolError("unknown_id", f"no fulfillment {fulfillment_id}")
    return item.fulfillments[fulfillment_id]


def update_review(
    st: BountyState,
    poe: PoEState,
    tx: TxFrame,
    antreview_id: int,
    fulfillment_id: int,
    new_hash: str,
) -> None:
    item = st.require(antreview_id)
    fulfillment = _require_fulfillment(item, fulfillment_id)
    if fulfillment.reviewer != tx.sender:
        raise ProtocolError("not_reviewer")
    if fulfillment.accepted:
        raise ProtocolError("already_accepted", "paid reviews are immutable")
    if tx.now >= item.deadline:
        raise ProtocolError("deadline_passed")
    fulfillment.review_hashes.append((new_hash, tx.now))
    poe_mod.notarize(poe, tx, new_hash)
    tx.emit(
        "ReviewUpdated",
        [
            ("id", str(antreview_id)),
            ("fulfillment_id", str(fulfillment_id)),
            ("review_hash", new_hash),
            ("version", str(len(fulfillment.review_hashes) - 1)),
        ],
    )


def accept_ant_review(
    st: BountyState,
    tokens: TokenState,
    tx: TxFrame,
    antreview_id: int,
    fulfillment_id: int,
    amount: int,
) -> None:
    item = st.require(antreview_id)
    fulfillment = _require_fulfillment(item, fulfillment_id)
    if not item.is_approver(tx.sender):
        raise ProtocolError("not_approver")
    if fulfillment.accepted:
        raise ProtocolError("already_accepted")
    amount = checked_amount(amount)
    if amount == 0:
        raise ProtocolError("zero_amount")
    if amount > item.balance:
        raise ProtocolError("insufficient_balance", "amount exceeds AntReview balance")
    token_mod.pay_from_escrow(tokens, tx, fulfillment.reviewer, amount)
    fulfillment.accepted = True
    fulfillment.paid = amount
    item.balance -= amount
    item.total_paid += amount
    tx.emit(
        "Accepted",
        [
            ("id", str(antreview_id)),
            ("fulfillment_id", str(fulfillment_id)),
            ("reviewer", fulfillment.reviewer),
            ("amount", str(amount)),
        ],
    )


def refund(
    st: BountyState,
    tokens: TokenState,
    tx: TxFrame,
    antreview_id: int,
    contribution_index: int,
) -> None:
    item = st.require(antreview_id)
    if not 0 <= contribution_index < len(item.contributions):
        raise ProtocolError("unknown_id", f"no contribution {contribution_index}")
    contribution = item.contributions[contribution_index]
    if contribution.contributor != tx.sender:
        raise ProtocolError("not_contributor")
    if tx.now < item.deadline:
        raise ProtocolError("deadline_not_reached")
    if item.fulfillments:
        raise ProtocolError("fulfillments_exist", "a peer review was received")
    if contribution.refunded:
        raise ProtocolError("already_refunded")
    token_mod.pay_from_escrow(tokens, tx, contribution.contributor, contribution.amount)
    contribution.refunded = True
    item.balance -= contribution.amount
    tx.emit(
        "Refunded",
        [
            ("id", str(antreview_id)),
            ("contribution_index", str(contribution_index)),
            ("contributor", contribution.contributor),
            ("amount", str(contribution.amount)),
        ],
    )


def withdraw_ant_review(
    st: BountyState, tokens: TokenState, tx: TxFrame, antreview_id: int, amount: int
) -> None:
    item = st.require(antreview_id)
    if not item.is_issuer(tx.sender):
        raise ProtocolError("not_issuer")
    if tx.now < item.deadline:
        raise ProtocolError("deadline_not_reached")
    amount = checked_amount(amount)
    if amount > item.balance:
        raise ProtocolError("insufficient_balance", "amount exceeds AntReview balance")
    token_mod.pay_from_escrow(tokens, tx, tx.sender, amount)
    item.balance -= amount
    item.total_withdrawn += amount
    tx.emit(
        "Withdrawn",
        [
            ("id", str(antreview_id)),
            ("issuer", tx.sender),
            ("amount", str(amount)),
        ],
    )


def antreview_view(item: AntReview) -> dict:
    return {
        "id": item.id,
        "issuers": list(item.issuers),
        "approvers": sorted(item.approvers),
        "paper_hash": item.paper_hash,
        "requirements_hash": item.requirements_hash,
        "deadline": item.deadline,
        "balance": str(item.balance),
        "contributions": [
            {
                "contributor": c.contributor,
                "amount": str(c.amount),
                "refunded": c.refunded,
            }
            for c in item.contributions
        ],
        "fulfillments": [
            {
                "reviewer": f.reviewer,
                "review_hashes": [[h, t] for h, t in f.review_hashes],
                "accepted": f.accepted,
                "paid": str(f.paid),
            }
            for f in item.fulfillments
        ],
        "total_paid": str(item.total_paid),
        "total_withdrawn": str(item.total_withdrawn),
    }


def state_view(st: BountyState) -> dict:
    return {
        "next_id": st.next_id,
        "items": {str(i): antreview_view(item) for i, item in st.items.items()},
    }


def state_from_view(view: dict) -> BountyState:
    items: dict[int, AntReview] = {}
    for key, v in view["items"].items():
        items[int(key)] = AntReview(
            id=int(v["id"]),
            issuers=list(v["issuers"]),
            approvers={a: True for a in v["approvers"]},
            paper_hash=v["paper_hash"],
            requirements_hash=v["requirements_hash"],
            deadline=int(v["deadline"]),
            balance=int(v["balance"]),
            contributions=[
                Contribution(
                    contributor=c["contributor"],
                    amount=int(c["amount"]),
                    refunded=bool(c["refunded"]),
                )
                for c in v["contributions"]
            ],
            fulfillments=[
                Fulfillment(
                    reviewer=f["reviewer"],
                    review_hashes=[(h, int(t)) for h, t in f["review_hashes"]],
                    accepted=bool(f["accepted"]),
                    paid=int(f["paid"]),
                )
                for f in v["fulfillments"]
            ],
            total_paid=int(v["total_paid"]),
            total_withdrawn=int(v["total_withdrawn"]),
        )
    return BountyState(items=items, next_id=int(view["next_id"]))
