"""Command line entry points.

    proofbench serve                  run the API service (env-configured)
    proofbench mock-prover ...        run a standalone mock prover server
    proofbench validate-tutorial F    authoring check for a tutorial file
    proofbench dev-token ROLE         mint a token for the env HS256 issuer
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="proofbench")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the API service")
    serve.add_argument("--tutorials", help="directory of tutorial .toml files to load", default=None)

    mock = sub.add_parser("mock-prover", help="run a mock prover server")
    mock.add_argument("--host", default="127.0.0.1")
    mock.add_argument("--port", type=int, default=0)
    mock.add_argument("--mode", choices=("fixture", "structural"), default="fixture")
    mock.add_argument("--fixtures")
    mock.add_argument("--fail-after", type=int, default=None)

    validate = sub.add_parser("validate-tutorial", help="check a tutorial file")
    validate.add_argument("path")
    validate.add_argument("--profile", default="permissive")

    token = sub.add_parser("dev-token", help="mint a token for the PB_ISSUER_SECRET issuer")
    token.add_argument("role", choices=("student", "teacher", "admin"))
    token.add_argument("--user", default=None)

    args = parser.parse_args(argv)
    if args.command == "mock-prover":
        from .prover import mock_server

        forwarded = ["--host", args.host, "--port", str(args.port), "--mode", args.mode]
        if args.fixtures:
            forwarded += ["--fixtures", args.fixtures]
        if args.fail_after is not None:
            forwarded += ["--fail-after", str(args.fail_after)]
        return mock_server.main(forwarded)

    if args.command == "validate-tutorial":
        return _validate_tutorial(args.path, args.profile)

    if args.command == "dev-token":
        return _dev_token(args.role, args.user)

    return _serve(args.tutorials)


def _serve(tutorials_dir: str | None) -> int:
    import uvicorn

    from .service import ServiceConfig, build_state, create_app
    from .tutorial import Course, load_tutorial_file

    config = ServiceConfig.from_env()
    state = build_state(config)

    # optional: preload course material so the service is usable immediately
    if tutorials_dir:
        course = Course(
            id="local",
            title="Local course",
            locales=("en", "de"),
            profile_id="permissive",
            tutorial_ids=(),
            roster=frozenset(),
            owner_id=None,
        )
        state.registry.create_course(course)
        for path in sorted(Path(tutorials_dir).glob("*.toml")):
            tutorial = load_tutorial_file(path)
            state.registry.add_tutorial("local", tutorial)
            print(f"loaded tutorial {tutorial.id} from {path}")

    app = create_app(state)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
    return 0


def _validate_tutorial(path: str, profile_id: str) -> int:
    from .isar import load_profiles
    from .tutorial import TutorialFormatError, TutorialValidationError, load_tutorial_file, validate_tutorial

    profiles = load_profiles()
    profile = profiles.get(profile_id)
    if profile is None:
        print(f"unknown profile {profile_id!r}; available: {sorted(profiles)}", file=sys.stderr)
        return 2
    try:
        tutorial = load_tutorial_file(path)
    except (TutorialFormatError, TutorialValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    findings = validate_tutorial(tutorial, profile)
    for diag in findings:
        print(json.dumps(diag.to_dict(), ensure_ascii=False))
    if any(d.severity.value == "error" for d in findings):
        return 1
    sections = len(tutorial.sections)
    tasks = len(tutorial.task_blocks())
    print(f"ok: {tutorial.id} ({sections} sections, {tasks} tasks)")
    return 0


def _dev_token(role: str, user: str | None) -> int:
    import os

    from .service.auth import issue_token

    secret = os.environ.get("PB_ISSUER_SECRET")
    issuer = os.environ.get("PB_ISSUER_URL", "https://issuer.test")
    if not secret:
        print("set PB_ISSUER_SECRET to mint HS256 tokens", file=sys.stderr)
        return 2
    token = issue_token(
        {"sub": user or f"dev-{role}", "roles": [role], "preferred_username": user or role},
        issuer,
        secret.encode("utf-8"),
        algorithm="HS256",
    )
    print(token)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
