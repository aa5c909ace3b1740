"""Verification of externally issued bearer tokens.

The platform never hosts identity itself: a separate issuer signs compact
JWS tokens (``header.payload.signature``, base64url without padding) and
this module only verifies them against the configured issuers' keys.
Supported algorithms: ``HS256`` (shared secret) and ``EdDSA`` (Ed25519).

A Principal is derived solely from a verified token, never from request
bodies. Expected claims: ``iss``, ``sub``, ``exp``, a roles claim
(default ``roles``), and a username claim (default ``preferred_username``).
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import time
from dataclasses import dataclass, field
from typing import Any, Mapping

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

KNOWN_ROLES = ("student", "teacher", "admin")
# capability order: teacher can do what a student can, admin everything
_ROLE_RANK = {"student": 0, "teacher": 1, "admin": 2}


class AuthError(Exception):
    def __init__(self, code: str, status: int, message: str):
        super().__init__(message)
        self.code = code
        self.status = status


@dataclass(frozen=True)
class Principal:
    user_id: str
    roles: frozenset[str]
    issuer: str
    username: str

    def rank(self) -> int:
        return max((_ROLE_RANK[r] for r in self.roles), default=-1)

    def has_role(self, minimum: str) -> bool:
        return self.rank() >= _ROLE_RANK[minimum]

    @property
    def is_admin(self) -> bool:
        return "admin" in self.roles


@dataclass
class IssuerConfig:
    issuer: str
    algorithm: str  # HS256 | EdDSA
    verify_key: Any  # bytes (HS256) or Ed25519PublicKey (EdDSA)
    roles_claim: str = "roles"
    username_claim: str = "preferred_username"

    def __post_init__(self) -> None:
        if self.algorithm not in ("HS256", "EdDSA"):
            raise ValueError(f"unsupported algorithm {self.algorithm!r}")


def _b64url_encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(text: str) -> bytes:
    padding = "=" * (-len(text) % 4)
    return base64.urlsafe_b64decode(text + padding)


def issue_token(
    claims: Mapping[str, Any],
    issuer: str,
    signing_key: Any,
    algorithm: str = "EdDSA",
    expires_in: float = 3600.0,
) -> str:
    """Mint a token (test fixtures and the local dev issuer)."""
    payload = dict(claims)
    payload.setdefault("iss", issuer)
    payload.setdefault("exp", time.time() + expires_in)
    header = {"alg": algorithm, "typ": "JWT"}
    signing_input = (
        _b64url_encode(json.dumps(header, separators=(",", ":")).encode())
        + "."
        + _b64url_encode(json.dumps(payload, separators=(",", ":")).encode())
    ).encode("ascii")
    if algorithm == "HS256":
        signature = hmac.new(signing_key, signing_input, hashlib.sha256).digest()
    elif algorithm == "EdDSA":
        assert isinstance(signing_key, Ed25519PrivateKey)
        signature = signing_key.sign(signing_input)
    else:
        raise ValueError(f"unsupported algorithm {algorithm!r}")
    return signing_input.decode("ascii") + "." + _b64url_encode(signature)


class TokenVerifier:
    def __init__(self, issuers: Mapping[str, IssuerConfig], leeway: float = 30.0):
        self.issuers = dict(issuers)
        self.leeway = leeway

    def verify(self, raw_token: str) -> Principal:
        try:
            header_b64, payload_b64, signature_b64 = raw_token.split(".")
            header = json.loads(_b64url_decode(header_b64))
            payload = json.loads(_b64url_decode(payload_b64))
            signature = _b64url_decode(signature_b64)
        except (ValueError, json.JSONDecodeError) as exc:
            raise AuthError("malformed-token", 401, f"cannot parse token: {exc}") from exc

        issuer = payload.get("iss")
        config = self.issuers.get(issuer)
        if config is None:
            raise AuthError("unknown-issuer", 401, f"issuer {issuer!r} is not allowed")
        if header.get("alg") != config.algorithm:
            raise AuthError("bad-signature", 401, "token algorithm mismatch")

        signing_input = f"{header_b64}.{payload_b64}".encode("ascii")
        if config.algorithm == "HS256":
            expected = hmac.new(config.verify_key, signing_input, hashlib.sha256).digest()
            if not hmac.compare_digest(expected, signature):
                raise AuthError("bad-signature", 401, "signature check failed")
        else:
            key: Ed25519PublicKey = config.verify_key
            try:
                key.verify(signature, signing_input)
            except InvalidSignature as exc:
                raise AuthError("bad-signature", 401, "signature check failed") from exc

        exp = payload.get("exp")
        if not isinstance(exp, (int, float)) or exp < time.time() - self.leeway:
            raise AuthError("expired", 401, "token is expired")

        subject = payload.get("sub")
        if not isinstance(subject, str) or not subject:
            raise AuthError("malformed-token", 401, "token has no subject")

        raw_roles = payload.get(config.roles_claim)
        roles = frozenset(r for r in raw_roles or () if r in KNOWN_ROLES)
        if not roles:
            raise AuthError("missing-roles", 403, "token grants no known role")

        username = payload.get(config.username_claim) or subject
        return Principal(user_id=subject, roles=roles, issuer=issuer, username=str(username))


def fixture_issuer(issuer: str = "https://issuer.test") -> tuple[IssuerConfig, Ed25519PrivateKey]:
    """A fresh Ed25519 issuer for fixtures: (config, signing key)."""
    private = Ed25519PrivateKey.generate()
    config = IssuerConfig(issuer=issuer, algorithm="EdDSA", verify_key=private.public_key())
    return config, private
