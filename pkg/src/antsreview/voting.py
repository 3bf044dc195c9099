"""Community vote on fulfilled reviews with proportional pool payout.

A tally reserves part of a bounty's balance as a reward pool once the
deadline has passed. Each address votes once per fulfillment, up or down.
Finalization splits the pool by score = max(up - down, 0), floor-dividing
and handing the integer remainder to the best-scoring fulfillment (lowest
id on ties) so the split is deterministic and exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import token as token_mod
from .bounties import AntReview, BountyState
from .errors import ProtocolError
from .runtime import TxFrame, checked_amount
from .token import TokenState


@dataclass
class VoteTally:
    antreview_id: int
    pool: int
    votes: dict[int, list[int]]  # fulfillment id -> [up, down]
    voted: dict[str, bool] = field(default_factory=dict)  # "addr:fid" keys
    finalized: bool = False


@dataclass
class VotingState:
    tallies: dict[int, VoteTally] = field(default_factory=dict)

    def require(self, antreview_id: int) -> VoteTally:
        tally = self.tallies.get(antreview_id)
        if tally is None:
            raise ProtocolError("no_tally", f"no tally for AntReview {antreview_id}")
        return tally


def split_pool(pool: int, scores: dict[int, int]) -> dict[int, int]:
    """Floor-proportional split of `pool` over nonnegative scores.

    Returns an empty mapping when every score is zero (pool goes back to
    the bounty). Otherwise payouts sum to the pool exactly: the remainder
    after floor division goes to the highest score, ties to the lowest id.
    """
    total = sum(scores.values())
    if total == 0:
        return {}
    payouts = {fid: pool * score // total for fid, score in scores.items()}
    remainder = pool - sum(payouts.values())
    if remainder:
        best = min(scores, key=lambda fid: (-scores[fid], fid))
        payouts[best] += remainder
    return payouts


def open_voting(
    st: VotingState,
    bounties: BountyState,
    tx: TxFrame,
    antreview_id: int,
    pool: int,
) -> None:
    item = bounties.require(antreview_id)
    if not item.is_issuer(tx.sender):
        raise ProtocolError("not_issuer")
    if tx.now < item.deadline:
        raise ProtocolError("deadline_not_reached")
    if antreview_id in st.tallies:
        raise ProtocolError("already_open", "one tally per AntReview")
    if not item.fulfillments:
        raise ProtocolError("no_fulfillments")
    pool = checked_amount(pool, "pool")
    if pool > item.balance:
        raise ProtocolError("insufficient_balance", "pool exceeds AntReview balance")
    item.balance -= pool
    st.tallies[antreview_id] = VoteTally(
        antreview_id=antreview_id,
        pool=pool,
        votes={fid: [0, 0] for fid in range(len(item.fulfillments))},
    )
    tx.emit(
        "VotingOpened",
        [("id", str(antreview_id)), ("pool", str(pool))],
    )


def vote(
    st: VotingState,
    bounties: BountyState,
    tx: TxFrame,
    antreview_id: int,
    fulfillment_id: int,
    direction: str,
) -> None:
    if direction not in ("up", "down"):
        raise ProtocolError("invalid_args", "direction must be 'up' or 'down'")
    tally = st.require(antreview_id)
    if tally.finalized:
        raise ProtocolError("already_finalized")
    if fulfillment_id not in tally.votes:
        raise ProtocolError("unknown_id", f"no fulfillment {fulfillment_id}")
    item = bounties.require(antreview_id)
    if item.fulfillments[fulfillment_id].reviewer == tx.sender:
        raise ProtocolError("self_vote")
    key = f"{tx.sender}:{fulfillment_id}"
    if key in tally.voted:
        raise ProtocolError("double_vote")
    tally.voted[key] = True
    tally.votes[fulfillment_id][0 if direction == "up" else 1] += 1
    tx.emit(
        "Voted",
        [
            ("id", str(antreview_id)),
            ("fulfillment_id", str(fulfillment_id)),
            ("voter", tx.sender),
            ("direction", direction),
        ],
    )


def finalize_voting(
    st: VotingState,
    bounties: BountyState,
    tokens: TokenState,
    tx: TxFrame,
    antreview_id: int,
) -> dict[int, int]:
    tally = st.require(antreview_id)
    if tally.finalized:
        raise ProtocolError("already_finalized")
    item = bounties.require(antreview_id)
    if not (item.is_issuer(tx.sender) or item.is_approver(tx.sender)):
        raise ProtocolError("not_authorized", "issuer or approver required")

    scores = {fid: max(up - down, 0) for fid, (up, down) in tally.votes.items()}
    payouts = split_pool(tally.pool, scores)
    if not payouts:
        item.balance += tally.pool
        tally.finalized = True
        tx.emit(
            "VotingFinalized",
            [("id", str(antreview_id)), ("payouts", ""), ("restored", str(tally.pool))],
        )
        return {}

    for fid in sorted(payouts):
        amount = payouts[fid]
        if amount == 0:
            continue
        fulfillment = item.fulfillments[fid]
        token_mod.pay_from_escrow(tokens, tx, fulfillment.reviewer, amount)
        fulfillment.paid += amount
        fulfillment.accepted = True
        item.total_paid += amount
    tally.finalized = True
    rendered = ",".join(f"{fid}:{payouts[fid]}" for fid in sorted(payouts))
    tx.emit(
        "VotingFinalized",
        [("id", str(antreview_id)), ("payouts", rendered), ("restored", "0")],
    )
    return payouts


def tally_view(tally: VoteTally) -> dict:
    return {
        "antreview_id": tally.antreview_id,
        "pool": str(tally.pool),
        "votes": {str(fid): list(ud) for fid, ud in tally.votes.items()},
        "voted": sorted(tally.voted),
        "finalized": tally.finalized,
    }


def state_view(st: VotingState) -> dict:
    return {"tallies": {str(i): tally_view(t) for i, t in st.tallies.items()}}


def state_from_view(view: dict) -> VotingState:
    tallies: dict[int, VoteTally] = {}
    for key, t in view["tallies"].items():
        tallies[int(key)] = VoteTally(
            antreview_id=int(t["antreview_id"]),
            pool=int(t["pool"]),
            votes={int(fid): [int(u), int(d)] for fid, (u, d) in t["votes"].items()},
            voted={k: True for k in t["voted"]},
            finalized=bool(t["finalized"]),
        )
    return VotingState(tallies=tallies)
