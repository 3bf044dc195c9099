"""Value-hiding note transfers over additively homomorphic commitments.

Public ANTS convert into notes (shield) and back (unshield); join-split
moves hidden value between notes, verified by comparing commitment
products, never by seeing amounts.

SECURITY SCOPE: a commitment C = g^v * h^r mod p hides and binds v, and
products conserve committed value, but there are NO range proofs here. A
prover exploiting modular wraparound of v is stopped only by the v < 2^64
bound enforced at the shield/unshield boundary and by q being large in the
default parameters. The toy parameters additionally have a known g/h
relation (h = g^2), so openings are unique only up to that relation. Do not
treat this module as production cryptography; it reproduces the protocol
role of a confidential asset at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ProtocolError
from .hashing import Address, ZERO_ADDRESS
from .runtime import TxFrame, checked_amount
from .token import TokenState

V_BOUND = 2**64


@dataclass(frozen=True)
class GroupParams:
    """Prime-order subgroup parameters for the commitment scheme."""

    p: int  # prime modulus
    q: int  # prime order of the subgroup, q | p-1
    g: int  # subgroup generator
    h: int  # second generator, derived by hashing g (dlog unknown)

    def validate(self) -> None:
        if (self.p - 1) % self.q != 0:
            raise ValueError("q must divide p-1")
        for name, base in (("g", self.g), ("h", self.h)):
            if not 1 < base < self.p:
                raise ValueError(f"{name} out of range")
            if pow(base, self.q, self.p) != 1:
                raise ValueError(f"{name} is not in the order-q subgroup")

    @property
    def element_bytes(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def render(self, element: int) -> str:
        return "0x" + element.to_bytes(self.element_bytes, "big").hex()

    def commit(self, v: int, r: int) -> int:
        return (pow(self.g, v, self.p) * pow(self.h, r, self.p)) % self.p

    def in_subgroup(self, element: int) -> bool:
        return 0 < element < self.p and pow(element, self.q, self.p) == 1


# Default parameters: p = 2q + 1 where q is the smallest 255-bit prime such
# that p is also prime; g = 4 (a quadratic residue, hence order q); h is the
# square of a hash of g reduced mod p.
DEFAULT_PARAMS = GroupParams(
    p=0x800000000000000000000000000000000000000000000000000000000002FF7F,
    q=0x4000000000000000000000000000000000000000000000000000000000017FBF,
    g=4,
    h=0x5084ADAAE40CFEDF5BCF045B80CC48F8A54B5AA6460FA9F7C3CA24ED5C6B6333,
)

# Tiny subgroup for exhaustive tests (h = g^2 here; see module docstring).
TOY_PARAMS = GroupParams(p=23, q=11, g=2, h=4)


@dataclass
class Note:
    note_id: int
    commitment: int
    owner: Address
    spent: bool = False


@dataclass
class ConfidentialState:
    params: GroupParams = DEFAULT_PARAMS
    notes: dict[int, Note] = field(default_factory=dict)
    next_note_id: int = 0

    def require_note(self, note_id: int) -> Note:
        note = self.notes.get(note_id)
        if note is None:
            raise ProtocolError("unknown_id", f"no note {note_id}")
        return note

    def add_note(self, commitment: int, owner: Address) -> Note:
        note = Note(note_id=self.next_note_id, commitment=commitment, owner=owner)
        self.next_note_id += 1
        self.notes[note.note_id] = note
        return note


def verify_commitment(params: GroupParams, c: int, v: int, r: int) -> bool:
    """Pure check that (v, r) opens the commitment c."""
    if v < 0 or r < 0:
        return False
    return params.commit(v, r) == c


def _checked_scalar(params: GroupParams, r: int, what: str = "r") -> int:
    if not isinstance(r, int) or isinstance(r, bool):
        raise ProtocolError("invalid_args", f"{what} must be an integer")
    if not 0 <= r < params.q:
        raise ProtocolError("bad_scalar", f"{what} must lie in [0, q)")
    return r


def shield(
    st: ConfidentialState, tokens: TokenState, tx: TxFrame, amount: int, r: int
) -> Note:
    amount = checked_amount(amount)
    if amount >= V_BOUND:
        raise ProtocolError("overflow", "shielded value must be below 2^64")
    r = _checked_scalar(st.params, r)
    if tokens.balance_of(tx.sender) < amount:
        raise ProtocolError("insufficient_balance")
    tokens.burn(tx.sender, amount)
    note = st.add_note(st.params.commit(amount, r), tx.sender)
    tx.emit(
        "Shielded",
        [
            ("note_id", str(note.note_id)),
            ("owner", tx.sender),
            ("commitment", st.params.render(note.commitment)),
            ("amount", str(amount)),
        ],
    )
    return note


def join_split(
    st: ConfidentialState,
    tx: TxFrame,
    input_note_ids: list[int],
    output_commitments: list[int],
    output_owners: list[Address],
    randomness_balance_proof: int = 0,
) -> list[Note]:
    if not input_note_ids:
        raise ProtocolError("empty_inputs")
    if not output_commitments:
        raise ProtocolError("empty_outputs")
    if len(output_commitments) != len(output_owners):
        raise ProtocolError("invalid_args", "one owner per output commitment")
    if len(set(input_note_ids)) != len(input_note_ids):
        raise ProtocolError("spent", "duplicate input note")

    inputs = [st.require_note(i) for i in input_note_ids]
    for note in inputs:
        if note.owner != tx.sender:
            raise ProtocolError("not_owner", f"note {note.note_id}")
        if note.spent:
            raise ProtocolError("spent", f"note {note.note_id}")
    for owner in output_owners:
        if owner == ZERO_ADDRESS:
            raise ProtocolError("zero_address", "output owner is the zero address")
    for c in output_commitments:
        if not st.params.in_subgroup(c):
            raise ProtocolError("invalid_commitment", "not a subgroup element")

    product_in = 1
    for note in inputs:
        product_in = (product_in * note.commitment) % st.params.p
    product_out = 1
    for c in output_commitments:
        product_out = (product_out * c) % st.params.p
    if product_in != product_out:
        raise ProtocolError("product_check_failed", "committed value not conserved")

    for note in inputs:
        note.spent = True
    outputs = [
        st.add_note(c, owner) for c, owner in zip(output_commitments, output_owners)
    ]
    tx.emit(
        "JoinSplit",
        [
            ("inputs", ",".join(str(i) for i in input_note_ids)),
            ("outputs", ",".join(str(n.note_id) for n in outputs)),
            (
                "commitments",
                ",".join(st.params.render(n.commitment) for n in outputs),
            ),
        ],
    )
    return outputs


def unshield(
    st: ConfidentialState,
    tokens: TokenState,
    tx: TxFrame,
    note_id: int,
    v: int,
    r: int,
) -> int:
    note = st.require_note(note_id)
    if note.owner != tx.sender:
        raise ProtocolError("not_owner")
    if note.spent:
        raise ProtocolError("spent")
    v = checked_amount(v, "v")
    if v >= V_BOUND:
        raise ProtocolError("overflow", "unshielded value must be below 2^64")
    r = _checked_scalar(st.params, r)
    if st.params.commit(v, r) != note.commitment:
        raise ProtocolError("bad_opening", "(v, r) does not open the commitment")
    tokens.mint(tx.sender, v)
    note.spent = True
    tx.emit(
        "Unshielded",
        [("note_id", str(note_id)), ("owner", tx.sender), ("amount", str(v))],
    )
    return v


def params_view(params: GroupParams) -> dict:
    return {
        "p": str(params.p),
        "q": str(params.q),
        "g": str(params.g),
        "h": str(params.h),
    }


def params_from_view(view: dict) -> GroupParams:
    params = GroupParams(
        p=int(view["p"]), q=int(view["q"]), g=int(view["g"]), h=int(view["h"])
    )
    params.validate()
    return params


def state_view(st: ConfidentialState) -> dict:
    return {
        "params": params_view(st.params),
        "next_note_id": st.next_note_id,
        "notes": {
            str(i): {
                "commitment": st.params.render(n.commitment),
                "owner": n.owner,
                "spent": n.spent,
            }
            for i, n in st.notes.items()
        },
    }


def state_from_view(view: dict) -> ConfidentialState:
    params = params_from_view(view["params"])
    return ConfidentialState(
        params=params,
        next_note_id=int(view["next_note_id"]),
        notes={
            int(i): Note(
                note_id=int(i),
                commitment=int(n["commitment"], 16),
                owner=n["owner"],
                spent=bool(n["spent"]),
            )
            for i, n in view["notes"].items()
        },
    )
