"""Shared service harness: a wired TestClient around an in-memory store and
an in-process mock prover pool."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Callable

from starlette.testclient import TestClient

from proofbench.prover import InProcessMockLauncher
from proofbench.service import ServiceConfig, build_state, create_app, issue_token
from proofbench.service.auth import fixture_issuer
from proofbench.store import InMemoryStore

from .conftest import TUTORIALS


@dataclass
class Service:
    client: TestClient
    state: Any
    issuer_config: Any
    signing_key: Any

    def token(self, role: str, sub: str | None = None, **claims) -> str:
        payload = {
            "sub": sub or f"{role}-1",
            "roles": [role],
            "preferred_username": f"{sub or role}-name",
        }
        payload.update(claims)
        return issue_token(payload, self.issuer_config.issuer, self.signing_key)

    def headers(self, role: str, sub: str | None = None) -> dict[str, str]:
        return {"authorization": f"Bearer {self.token(role, sub)}"}

    def wait_check(self, role: str, sub: str, request_id: str, timeout: float = 15.0) -> dict:
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            response = self.client.get(
                f"/v1/checks/{request_id}", headers=self.headers(role, sub)
            )
            assert response.status_code == 200, response.text
            entry = response.json()
            if entry["state"] == "done":
                return entry["response"]
            time.sleep(0.02)
        raise TimeoutError(f"check {request_id} never completed")


@contextmanager
def make_service(
    prover_mode: str = "structural",
    fixtures: dict | None = None,
    pool_initial: int = 2,
    pool_max: int = 8,
    check_timeout: float = 10.0,
    configure: Callable[[ServiceConfig], None] | None = None,
):
    issuer_config, signing_key = fixture_issuer()
    config = ServiceConfig(
        pool_initial=pool_initial,
        pool_max=pool_max,
        prover_mode=prover_mode,
        check_timeout=check_timeout,
    )
    if configure is not None:
        configure(config)
    launcher = InProcessMockLauncher(mode=prover_mode, fixtures=fixtures or {})
    state = build_state(
        config,
        issuers={issuer_config.issuer: issuer_config},
        launcher=launcher,
        store=InMemoryStore(),
    )
    client = TestClient(create_app(state))
    service = Service(client, state, issuer_config, signing_key)
    try:
        yield service
    finally:
        state.close()


def create_fixture_course(service: Service, course_id: str = "logic101", roster: tuple[str, ...] = ("student-1",)):
    """Standard fixture: one course owned by teacher-1 with the conjunction
    tutorial uploaded."""
    response = service.client.post(
        "/v1/courses",
        headers=service.headers("teacher"),
        json={
            "action": "create",
            "id": course_id,
            "title": "Logic 101",
            "profile": "propositional-v1",
            "roster": list(roster),
        },
    )
    assert response.status_code == 201, response.text
    document = (TUTORIALS / "conjunction.toml").read_text("utf-8")
    response = service.client.post(
        "/v1/tutorials",
        headers=service.headers("teacher"),
        json={"course_id": course_id, "document": document},
    )
    assert response.status_code == 201, response.text
    return course_id


def load_conjunction_fixtures() -> dict:
    return json.loads(
        (TUTORIALS / "fixtures" / "conjunction_prover.json").read_text("utf-8")
    )


def load_conjunction_solutions() -> dict:
    return json.loads((TUTORIALS / "solutions" / "conjunction.json").read_text("utf-8"))
