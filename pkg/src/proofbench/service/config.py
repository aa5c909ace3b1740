"""Service configuration from environment variables.

All knobs use the ``PB_`` prefix; defaults target a local single-host
deployment. The environment path configures one HS256 issuer; multi-issuer
or Ed25519 setups construct IssuerConfig values programmatically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8400
    issuer_url: str = "https://issuer.test"
    issuer_secret: bytes | None = None  # enables the HS256 env issuer
    pool_initial: int = 2
    pool_max: int = 30
    pool_session_cap: int = 10
    prover_mode: str = "structural"  # fixture | structural | external
    prover_fixtures: str | None = None
    external_endpoints: tuple[tuple[str, int], ...] = ()
    data_dir: Path = field(default_factory=lambda: Path("./data"))
    locale_default: str = "en"
    session_idle_timeout: float = 600.0
    check_timeout: float = 30.0

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)
        config = cls()
        listen = env.get("PB_LISTEN_ADDR")
        if listen:
            host, _, port = listen.rpartition(":")
            config.listen_host = host or "127.0.0.1"
            config.listen_port = int(port)
        config.issuer_url = env.get("PB_ISSUER_URL", config.issuer_url)
        secret = env.get("PB_ISSUER_SECRET")
        config.issuer_secret = secret.encode("utf-8") if secret else None
        config.pool_initial = int(env.get("PB_POOL_INITIAL", config.pool_initial))
        config.pool_max = int(env.get("PB_POOL_MAX", config.pool_max))
        config.pool_session_cap = int(env.get("PB_POOL_SESSION_CAP", config.pool_session_cap))
        mode = env.get("PB_PROVER_MODE", config.prover_mode)
        if mode not in ("fixture", "structural", "external"):
            raise ValueError(f"PB_PROVER_MODE must be fixture|structural|external, got {mode!r}")
        config.prover_mode = mode
        config.prover_fixtures = env.get("PB_PROVER_FIXTURES")
        endpoints = env.get("PB_EXTERNAL_ENDPOINTS", "")
        if endpoints:
            parsed = []
            for item in endpoints.split(","):
                host, _, port = item.strip().rpartition(":")
                parsed.append((host, int(port)))
            config.external_endpoints = tuple(parsed)
        config.data_dir = Path(env.get("PB_DATA_DIR", str(config.data_dir)))
        config.locale_default = env.get("PB_LOCALE_DEFAULT", config.locale_default)
        return config
