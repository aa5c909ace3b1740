from __future__ import annotations

import json
from pathlib import Path

import pytest

from proofbench.isar import load_profiles
from proofbench.service.auth import fixture_issuer, issue_token

REPO = Path(__file__).resolve().parent.parent
TUTORIALS = REPO / "tutorials"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def issuer():
    """(IssuerConfig, signing key) shared by the service tests."""
    return fixture_issuer()


@pytest.fixture(scope="session")
def profiles():
    return load_profiles()


@pytest.fixture(scope="session")
def restrictive_profile(profiles):
    return profiles["propositional-v1"]


@pytest.fixture()
def token_for(issuer):
    config, key = issuer

    def mint(role: str, sub: str | None = None, **claims):
        payload = {
            "sub": sub or f"{role}-1",
            "roles": [role],
            "preferred_username": f"{sub or role}-name",
        }
        payload.update(claims)
        return issue_token(payload, config.issuer, key)

    return mint


@pytest.fixture()
def auth_headers(token_for):
    def headers(role: str, sub: str | None = None):
        return {"authorization": f"Bearer {token_for(role, sub)}"}

    return headers


def load_solutions(name: str) -> dict:
    return json.loads((TUTORIALS / "solutions" / f"{name}.json").read_text("utf-8"))


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {outcome}", flush=True)
