"""Deterministic engine for an incentivized, bounty-based peer-review
protocol: token economy, role-gated bounty lifecycle, proof of existence,
value-hiding note transfers and community vote payouts, all replayable from
line-delimited scenario files.
"""

from .access import Role
from .confidential import DEFAULT_PARAMS, TOY_PARAMS, GroupParams, verify_commitment
from .env import DEPLOYER_ADDRESS, DEPLOYER_SEED, Environment, ExecResult
from .errors import ProtocolError
from .hashing import ZERO_ADDRESS, address_from_seed, content_hash_hex
from .token import ESCROW_ADDRESS
from .voting import split_pool

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PARAMS",
    "DEPLOYER_ADDRESS",
    "DEPLOYER_SEED",
    "ESCROW_ADDRESS",
    "Environment",
    "ExecResult",
    "GroupParams",
    "ProtocolError",
    "Role",
    "TOY_PARAMS",
    "ZERO_ADDRESS",
    "address_from_seed",
    "content_hash_hex",
    "split_pool",
    "verify_commitment",
    "__version__",
]
