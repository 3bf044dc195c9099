"""Shared test helpers: short-hand senders, funding, bounty setup."""

from __future__ import annotations

import hashlib

from antsreview import Environment, address_from_seed

DEPLOYER = "deployer"


def addr(seed: str) -> str:
    return address_from_seed(seed)


def h(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "0x" + hashlib.sha256(data).hexdigest()


def ok(env: Environment, sender: str, op: str, args: dict | None = None):
    result = env.execute(sender, op, args or {})
    assert result.ok, f"{op} rejected: {result.error}"
    return result


def err(env: Environment, sender: str, op: str, args: dict | None = None, code: str | None = None):
    result = env.execute(sender, op, args or {})
    assert not result.ok, f"{op} unexpectedly succeeded"
    if code is not None:
        assert result.error == code, f"expected {code!r}, got {result.error!r}"
    return result


def fund(env: Environment, seed: str, drips: int = 1) -> str:
    """Create an account and give it `drips` faucet drips."""
    env.create_account(seed)
    for _ in range(drips):
        if drips > 1:
            env.advance_time(env.token.drip_cooldown)
        ok(env, seed, "faucet_drip")
    return addr(seed)


def grant(env: Environment, role: str, seed: str) -> None:
    env.create_account(seed)
    ok(env, DEPLOYER, "grant_role", {"role": role, "who": seed})


def issue_bounty(
    env: Environment,
    issuer: str = "alice",
    approver: str = "ted",
    deadline: int | None = None,
    paper: str = "paper-1",
    requirements: str = "requirements-1",
) -> int:
    """Grant roles, create accounts and issue one bounty. Returns its id."""
    grant(env, "ISSUER", issuer)
    env.create_account(approver)
    if deadline is None:
        deadline = env.now + 1000
    result = ok(
        env,
        issuer,
        "issue_ant_review",
        {
            "issuers": [issuer],
            "approver": approver,
            "paper_hash": h(paper),
            "requirements_hash": h(requirements),
            "deadline": deadline,
        },
    )
    return result.value


def contribute(env: Environment, seed: str, antreview_id: int, amount: int) -> None:
    """Approve the escrow and contribute in one go (sender must be funded)."""
    ok(env, seed, "approve", {"spender": "escrow", "amount": amount})
    ok(env, seed, "contribute", {"id": antreview_id, "amount": amount})
