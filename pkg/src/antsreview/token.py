"""ANTS fungible token ledger and testing faucet.

Standard transfer/approval semantics with checked 128-bit arithmetic. All
ANTS enter circulation through the faucet (test-net model); the private
note layer burns on shield and mints back on unshield.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ProtocolError
from .hashing import Address, ZERO_ADDRESS, address_from_seed
from .runtime import TxFrame, checked_amount

TOKEN_NAME = "Ants-Review"
TOKEN_SYMBOL = "ANTS"
TOKEN_DECIMALS = 18

# Engine-owned account holding all escrowed ANTS (bounty balances and voting
# pools). It can never act as a sender and never receives plain transfers.
ESCROW_ADDRESS: Address = address_from_seed("escrow")

DEFAULT_DRIP_AMOUNT = 1000 * 10**TOKEN_DECIMALS
DEFAULT_DRIP_COOLDOWN = 86400


@dataclass
class TokenState:
    balances: dict[Address, int] = field(default_factory=dict)
    # allowances[owner][spender] = amount
    allowances: dict[Address, dict[Address, int]] = field(default_factory=dict)
    total_supply: int = 0
    last_drip: dict[Address, int] = field(default_factory=dict)
    drip_amount: int = DEFAULT_DRIP_AMOUNT
    drip_cooldown: int = DEFAULT_DRIP_COOLDOWN

    def balance_of(self, who: Address) -> int:
        return self.balances.get(who, 0)

    def allowance(self, owner: Address, spender: Address) -> int:
        return self.allowances.get(owner, {}).get(spender, 0)

    def _set_balance(self, who: Address, value: int) -> None:
        if value == 0:
            self.balances.pop(who, None)
        else:
            self.balances[who] = value

    def move(self, frm: Address, to: Address, amount: int) -> None:
        """Unchecked-policy balance move; caller enforces authorization."""
        amount = checked_amount(amount)
        if self.balance_of(frm) < amount:
            raise ProtocolError("insufficient_balance")
        checked_amount(self.balance_of(to) + amount, "recipient balance")
        self._set_balance(frm, self.balance_of(frm) - amount)
        self._set_balance(to, self.balance_of(to) + amount)

    def mint(self, to: Address, amount: int) -> None:
        amount = checked_amount(amount)
        checked_amount(self.total_supply + amount, "total supply")
        checked_amount(self.balance_of(to) + amount, "recipient balance")
        self.total_supply += amount
        self._set_balance(to, self.balance_of(to) + amount)

    def burn(self, frm: Address, amount: int) -> None:
        amount = checked_amount(amount)
        if self.balance_of(frm) < amount:
            raise ProtocolError("insufficient_balance")
        self.total_supply -= amount
        self._set_balance(frm, self.balance_of(frm) - amount)


def _emit_transfer(tx: TxFrame, frm: Address, to: Address, amount: int) -> None:
    tx.emit("Transfer", [("from", frm), ("to", to), ("amount", str(amount))])


def _check_recipient(to: Address) -> None:
    if to == ZERO_ADDRESS:
        raise ProtocolError("zero_address", "recipient is the zero address")
    if to == ESCROW_ADDRESS:
        raise ProtocolError("reserved_account", "escrow only receives staked funds")


def transfer(st: TokenState, tx: TxFrame, to: Address, amount: int) -> bool:
    amount = checked_amount(amount)
    _check_recipient(to)
    if st.balance_of(tx.sender) < amount:
        raise ProtocolError("insufficient_balance")
    st.move(tx.sender, to, amount)
    _emit_transfer(tx, tx.sender, to, amount)
    return True


def approve(st: TokenState, tx: TxFrame, spender: Address, amount: int) -> bool:
    amount = checked_amount(amount)
    if spender == ZERO_ADDRESS:
        raise ProtocolError("zero_address", "spender is the zero address")
    owner_allowances = st.allowances.setdefault(tx.sender, {})
    if amount == 0:
        owner_allowances.pop(spender, None)
        if not owner_allowances:
            st.allowances.pop(tx.sender, None)
    else:
        owner_allowances[spender] = amount
    tx.emit(
        "Approval",
        [("owner", tx.sender), ("spender", spender), ("amount", str(amount))],
    )
    return True


def _spend_allowance(st: TokenState, owner: Address, spender: Address, amount: int) -> None:
    current = st.allowance(owner, spender)
    if current < amount:
        raise ProtocolError("insufficient_allowance")
    if amount == 0:
        return
    remaining = current - amount
    owner_allowances = st.allowances[owner]
    if remaining == 0:
        owner_allowances.pop(spender, None)
        if not owner_allowances:
            st.allowances.pop(owner, None)
    else:
        owner_allowances[spender] = remaining


def transfer_from(
    st: TokenState, tx: TxFrame, owner: Address, to: Address, amount: int
) -> bool:
    amount = checked_amount(amount)
    _check_recipient(to)
    if st.allowance(owner, tx.sender) < amount:
        raise ProtocolError("insufficient_allowance")
    if st.balance_of(owner) < amount:
        raise ProtocolError("insufficient_balance")
    _spend_allowance(st, owner, tx.sender, amount)
    st.move(owner, to, amount)
    _emit_transfer(tx, owner, to, amount)
    return True


def pull_to_escrow(st: TokenState, tx: TxFrame, owner: Address, amount: int) -> None:
    """Stake funds: consume the owner's allowance granted to the escrow."""
    if st.allowance(owner, ESCROW_ADDRESS) < amount:
        raise ProtocolError("insufficient_allowance")
    if st.balance_of(owner) < amount:
        raise ProtocolError("insufficient_balance")
    _spend_allowance(st, owner, ESCROW_ADDRESS, amount)
    st.move(owner, ESCROW_ADDRESS, amount)
    _emit_transfer(tx, owner, ESCROW_ADDRESS, amount)


def pay_from_escrow(st: TokenState, tx: TxFrame, to: Address, amount: int) -> None:
    st.move(ESCROW_ADDRESS, to, amount)
    _emit_transfer(tx, ESCROW_ADDRESS, to, amount)


def faucet_drip(st: TokenState, tx: TxFrame) -> int:
    last = st.last_drip.get(tx.sender)
    if last is not None and tx.now < last + st.drip_cooldown:
        raise ProtocolError("cooldown", "faucet cooldown not elapsed")
    st.mint(tx.sender, st.drip_amount)
    st.last_drip[tx.sender] = tx.now
    tx.emit("Drip", [("to", tx.sender), ("amount", str(st.drip_amount))])
    return st.drip_amount


def state_view(st: TokenState) -> dict:
    return {
        "balances": {a: str(v) for a, v in st.balances.items()},
        "allowances": {
            owner: {spender: str(v) for spender, v in spenders.items()}
            for owner, spenders in st.allowances.items()
            if spenders
        },
        "total_supply": str(st.total_supply),
        "faucet": {
            "last_drip": {a: str(t) for a, t in st.last_drip.items()},
            "drip_amount": str(st.drip_amount),
            "cooldown": str(st.drip_cooldown),
        },
    }


def state_from_view(view: dict) -> TokenState:
    return TokenState(
        balances={a: int(v) for a, v in view["balances"].items()},
        allowances={
            owner: {spender: int(v) for spender, v in spenders.items()}
            for owner, spenders in view["allowances"].items()
        },
        total_supply=int(view["total_supply"]),
        last_drip={a: int(t) for a, t in view["faucet"]["last_drip"].items()},
        drip_amount=int(view["faucet"]["drip_amount"]),
        drip_cooldown=int(view["faucet"]["cooldown"]),
    )
