"""Instance launchers: in-process mock servers, subprocesses, or static
endpoints for an externally managed prover fleet."""

from __future__ import annotations

import subprocess
import sys
import threading
from dataclasses import dataclass
from typing import Any, Callable

from .mock_server import MockProverServer
from .pool import LaunchError
from .structural import StructuralConfig


@dataclass
class InProcessInstance:
    server: MockProverServer

    @property
    def endpoint(self) -> tuple[str, int]:
        return self.server.endpoint

    def stop(self) -> None:
        self.server.stop()


class InProcessMockLauncher:
    """Mock prover servers inside this process, one TCP listener each.

    The servers are real sockets speaking the real protocol; only the
    process boundary is elided, which keeps a 30-instance pool cheap enough
    for tests.
    """

    def __init__(
        self,
        mode: str = "fixture",
        fixtures: dict[str, Any] | None = None,
        fail_after: int | None = None,
        structural_config: StructuralConfig | None = None,
    ):
        self.mode = mode
        self.fixtures = fixtures
        self.fail_after = fail_after
        self.structural_config = structural_config
        self.servers: dict[int, MockProverServer] = {}
        self._lock = threading.Lock()

    def launch(self, instance_id: int) -> InProcessInstance:
        server = MockProverServer(
            mode=self.mode,
            fixtures=self.fixtures,
            fail_after=self.fail_after,
            structural_config=self.structural_config,
        ).start()
        with self._lock:
            self.servers[instance_id] = server
        return InProcessInstance(server)

    def server_for(self, instance_id: int) -> MockProverServer:
        with self._lock:
            return self.servers[instance_id]

    def stop_all(self) -> None:
        with self._lock:
            servers = list(self.servers.values())
        for server in servers:
            try:
                server.stop()
            except Exception:
                pass


class ScriptedLauncher:
    """Wraps a launcher and fails scripted launch attempts (test fixture).

    ``fail_launches`` counts attempts globally: the n-th call to ``launch``
    fails when n is listed.
    """

    def __init__(self, inner: Any, fail_launches: set[int] = frozenset()):
        self.inner = inner
        self.fail_launches = set(fail_launches)
        self._attempts = 0
        self._lock = threading.Lock()

    def launch(self, instance_id: int):
        with self._lock:
            self._attempts += 1
            attempt = self._attempts
        if attempt in self.fail_launches:
            raise LaunchError(f"scripted failure of launch attempt {attempt}")
        return self.inner.launch(instance_id)


@dataclass
class SubprocessInstance:
    process: subprocess.Popen
    endpoint: tuple[str, int]

    def stop(self) -> None:
        if self.process.poll() is None:
            self.process.terminate()
            try:
                self.process.wait(timeout=3)
            except subprocess.TimeoutExpired:
                self.process.kill()


class SubprocessMockLauncher:
    """Each instance is a ``python -m proofbench.prover.mock_server``
    child process; the assigned port is read from its first stdout line."""

    def __init__(self, mode: str = "fixture", fixtures_path: str | None = None):
        self.mode = mode
        self.fixtures_path = fixtures_path

    def launch(self, instance_id: int) -> SubprocessInstance:
        argv = [
            sys.executable,
            "-m",
            "proofbench.prover.mock_server",
            "--port",
            "0",
            "--mode",
            self.mode,
        ]
        if self.fixtures_path:
            argv += ["--fixtures", self.fixtures_path]
        process = subprocess.Popen(
            argv, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, text=True
        )
        assert process.stdout is not None
        banner = process.stdout.readline().strip()
        # "mock prover listening on HOST:PORT mode=..."
        try:
            address = banner.split(" on ", 1)[1].split()[0]
            host, port_text = address.rsplit(":", 1)
            endpoint = (host, int(port_text))
        except (IndexError, ValueError) as exc:
            process.kill()
            raise LaunchError(f"unexpected banner from mock prover: {banner!r}") from exc
        return SubprocessInstance(process, endpoint)


@dataclass
class StaticInstance:
    endpoint: tuple[str, int]

    def stop(self) -> None:
        pass  # externally managed


class StaticEndpointLauncher:
    """Attach to prover servers somebody else runs (``external`` mode).

    Endpoints are handed out in order; running out raises LaunchError.
    """

    def __init__(self, endpoints: list[tuple[str, int]]):
        self._endpoints = list(endpoints)
        self._lock = threading.Lock()

    def launch(self, instance_id: int) -> StaticInstance:
        with self._lock:
            if not self._endpoints:
                raise LaunchError("no external prover endpoints left")
            return StaticInstance(self._endpoints.pop(0))
