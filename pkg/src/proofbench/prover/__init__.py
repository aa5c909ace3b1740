"""Prover gateway: wire protocol, mock prover, and the instance pool."""

from .client import ProverClient, ProverConnectionError, ProverTimeout
from .launchers import (
    InProcessMockLauncher,
    ScriptedLauncher,
    StaticEndpointLauncher,
    SubprocessMockLauncher,
)
from .mock_server import MockProverServer, load_fixtures, theory_digest
from .pool import (
    InstanceState,
    LaunchError,
    NoHealthyInstance,
    Pool,
    PoolConfig,
    PoolError,
    PoolSaturated,
    ProofStateEntry,
    ProverInstance,
    ProverMessage,
    ProverResult,
    ScaleRangeError,
    SessionHandle,
    StaleSession,
    instances_for_roster,
)
from .protocol import ProtocolError, decode_message, encode_message
from .structural import StructuralConfig, StructuralReport, check_structure

__all__ = [
    "InProcessMockLauncher",
    "InstanceState",
    "LaunchError",
    "MockProverServer",
    "NoHealthyInstance",
    "Pool",
    "PoolConfig",
    "PoolError",
    "PoolSaturated",
    "ProofStateEntry",
    "ProtocolError",
    "ProverClient",
    "ProverConnectionError",
    "ProverInstance",
    "ProverMessage",
    "ProverResult",
    "ProverTimeout",
    "ScaleRangeError",
    "ScriptedLauncher",
    "SessionHandle",
    "StaleSession",
    "StaticEndpointLauncher",
    "StructuralConfig",
    "StructuralReport",
    "SubprocessMockLauncher",
    "check_structure",
    "decode_message",
    "encode_message",
    "instances_for_roster",
    "load_fixtures",
    "theory_digest",
]
