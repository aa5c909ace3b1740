"""HTTP and stream surface of the platform (all endpoints under ``/v1``).

Role-based access: roles are cumulative (admin > teacher > student), every
endpoint declares its minimum role in ``ROUTE_RULES`` and the matrix is
documented in ``docs/api.md``. Principals come exclusively from verified
bearer tokens. Handlers are synchronous (Starlette runs them on a thread
pool) except the stream endpoint; long-running checks never block other
requests because they run on the check service's own executor.
"""

from __future__ import annotations

import asyncio
import json
import logging
import queue
import uuid
from dataclasses import dataclass, field
from typing import Any

from starlette.applications import Starlette
from starlette.requests import Request
from starlette.responses import JSONResponse, PlainTextResponse, Response
from starlette.routing import Route, WebSocketRoute
from starlette.websockets import WebSocket, WebSocketDisconnect

from ..feedback import HintRule, RuleEntry, list_rules, load_hint_catalog, load_rule_catalog, search_rules
from ..isar import (
    SymbolEntry,
    SyntaxProfile,
    load_profiles,
    load_symbol_table,
    lookup_symbol,
    tokenize,
)
from ..prover import (
    InProcessMockLauncher,
    Pool,
    PoolConfig,
    ScaleRangeError,
    StaticEndpointLauncher,
    instances_for_roster,
    load_fixtures,
)
from ..store import InMemoryStore, SqliteStore, SubmissionStore, UnknownUser, UserProfile, utc_now_millis
from ..tutorial import (
    BlockKind,
    Course,
    Tutorial,
    TutorialFormatError,
    TutorialValidationError,
    load_tutorial,
    new_state,
    reset_progress,
    validate_tutorial,
)
from .auth import AuthError, IssuerConfig, Principal, TokenVerifier, fixture_issuer, issue_token
from .config import ServiceConfig
from .orchestrator import CheckRequest, CheckService, CheckValidationError
from .registry import CourseRegistry, NotFound, RegistryError

logger = logging.getLogger(__name__)

# (method, path, minimum role) — the complete endpoint surface. The RBAC
# sweep test walks this table; keep it in sync with the routes below.
ROUTE_RULES: list[tuple[str, str, str]] = [
    ("GET", "/v1/courses", "student"),
    ("POST", "/v1/courses", "teacher"),
    ("GET", "/v1/tutorials/{tutorial_id}", "student"),
    ("POST", "/v1/tutorials", "teacher"),
    ("POST", "/v1/checks", "student"),
    ("GET", "/v1/checks/{request_id}", "student"),
    ("POST", "/v1/progress/{tutorial_id}/reset", "student"),
    ("GET", "/v1/rules", "student"),
    ("GET", "/v1/symbols", "student"),
    ("POST", "/v1/tokens", "student"),
    ("GET", "/v1/admin/pool", "admin"),
    ("POST", "/v1/admin/pool/scale", "admin"),
    ("DELETE", "/v1/admin/users/{user_id}", "admin"),
    ("GET", "/v1/export", "teacher"),
]


@dataclass
class AppState:
    config: ServiceConfig
    store: SubmissionStore
    pool: Pool
    registry: CourseRegistry
    profiles: dict[str, SyntaxProfile]
    symbols: list[SymbolEntry]
    rules: list[RuleEntry]
    verifier: TokenVerifier
    checks: CheckService
    launcher: Any = None

    def close(self) -> None:
        self.checks.close()
        self.pool.close()
        if self.launcher is not None and hasattr(self.launcher, "stop_all"):
            self.launcher.stop_all()


def build_state(
    config: ServiceConfig,
    issuers: dict[str, IssuerConfig] | None = None,
    launcher: Any = None,
    store: SubmissionStore | None = None,
) -> AppState:
    """Wire the service from configuration (tests inject their own pieces)."""
    if store is None:
        if config.data_dir and str(config.data_dir) != ":memory:":
            config.data_dir.mkdir(parents=True, exist_ok=True)
            store = SqliteStore(config.data_dir / "proofbench.db")
        else:
            store = InMemoryStore()

    if launcher is None:
        if config.prover_mode == "external":
            launcher = StaticEndpointLauncher(list(config.external_endpoints))
        elif config.prover_mode == "fixture":
            fixtures = load_fixtures(config.prover_fixtures) if config.prover_fixtures else {}
            launcher = InProcessMockLauncher(mode="fixture", fixtures=fixtures)
        else:
            launcher = InProcessMockLauncher(mode="structural")

    if issuers is None:
        if config.issuer_secret is not None:
            issuer = IssuerConfig(config.issuer_url, "HS256", config.issuer_secret)
            issuers = {issuer.issuer: issuer}
        else:
            # ephemeral dev issuer; sample tokens land in the log
            issuer, signing_key = fixture_issuer(config.issuer_url)
            issuers = {issuer.issuer: issuer}
            for role in ("student", "teacher", "admin"):
                token = issue_token(
                    {"sub": f"dev-{role}", "roles": [role], "preferred_username": role},
                    issuer.issuer,
                    signing_key,
                )
                logger.warning("dev %s token: %s", role, token)

    pool_config = PoolConfig(
        initial_instances=config.pool_initial,
        max_instances=config.pool_max,
        session_cap=config.pool_session_cap,
        check_timeout=config.check_timeout,
    )
    pool = Pool(pool_config, launcher)
    checks = CheckService(
        store=store,
        pool=pool,
        hint_catalog=load_hint_catalog(),
        profiles=load_profiles(),
        locale_default=config.locale_default,
        session_idle_timeout=config.session_idle_timeout,
        check_timeout=config.check_timeout,
    )
    return AppState(
        config=config,
        store=store,
        pool=pool,
        registry=CourseRegistry(),
        profiles=checks.profiles,
        symbols=load_symbol_table(),
        rules=load_rule_catalog(),
        verifier=TokenVerifier(issuers),
        checks=checks,
        launcher=launcher,
    )


# -- request plumbing ---------------------------------------------------------


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": code, "message": message}, status_code=status)


class _Deny(Exception):
    def __init__(self, response: JSONResponse):
        self.response = response


def _authenticate(state: AppState, authorization: str | None) -> Principal:
    if not authorization or not authorization.lower().startswith("bearer "):
        raise _Deny(_error(401, "missing-token", "bearer token required"))
    try:
        principal = state.verifier.verify(authorization[7:].strip())
    except AuthError as exc:
        raise _Deny(_error(exc.status, exc.code, str(exc))) from exc
    if state.store.get_profile(principal.user_id) is None:
        state.store.put_profile(
            UserProfile(
                user_id=principal.user_id,
                username=principal.username,
                issuer=principal.issuer,
                is_admin=principal.is_admin,
                created_at=utc_now_millis(),
            )
        )
    return principal


def _require(state: AppState, request: Request, minimum: str) -> Principal:
    principal = _authenticate(state, request.headers.get("authorization"))
    if not principal.has_role(minimum):
        raise _Deny(_error(403, "forbidden", f"requires the {minimum} role"))
    return principal


def _json_body(request: Request) -> Any:
    import anyio

    # sync handlers run on anyio worker threads; hop to the loop for the body
    body = anyio.from_thread.run(request.body)
    if not body:
        raise _Deny(_error(400, "bad-request", "request body required"))
    try:
        return json.loads(body)
    except json.JSONDecodeError as exc:
        raise _Deny(_error(400, "bad-request", f"invalid JSON: {exc}")) from exc


def _locale(state: AppState, request: Request) -> str:
    return request.query_params.get("locale", state.config.locale_default)


def _can_read_course(state: AppState, principal: Principal, course: Course) -> bool:
    return (
        principal.is_admin
        or state.registry.is_owner(course, principal.user_id)
        or state.registry.is_enrolled(course, principal.user_id)
    )


def _scale_for_rosters(state: AppState) -> None:
    """Apply the pairing rule after course creation or enrollment."""
    sizing = max(
        (instances_for_roster(state.pool.config, len(c.roster)) for c in state.registry.list_courses()),
        default=0,
    )
    target = max(state.config.pool_initial, sizing)
    target = max(1, min(target, state.pool.config.max_instances))
    if target != state.pool.live_instance_count():
        state.pool.scale(target)


# -- views ---------------------------------------------------------------------


def _course_view(state: AppState, course: Course, principal: Principal) -> dict:
    return {
        "id": course.id,
        "title": course.title,
        "locales": list(course.locales),
        "profile": course.profile_id,
        "tutorials": list(course.tutorial_ids),
        "roster_size": len(course.roster),
        "enrolled": state.registry.is_enrolled(course, principal.user_id),
    }


def _tutorial_view(
    state: AppState, tutorial: Tutorial, course: Course, principal: Principal, teacher_view: bool
) -> dict:
    user_state = state.store.get_state(principal.user_id, tutorial.id)
    if user_state is None:
        user_state = new_state(tutorial, principal.user_id)
    sections = []
    for section in tutorial.sections:
        blocks = []
        for block in section.blocks:
            if block.kind is BlockKind.HIDDEN and not teacher_view:
                continue  # students never learn hidden blocks exist
            entry: dict[str, Any] = {"id": block.id, "kind": block.kind.value}
            if block.kind is BlockKind.TEXT:
                entry["content"] = dict(block.content)
            elif block.kind is BlockKind.EXAMPLE:
                entry["code"] = block.code
            elif block.kind is BlockKind.TASK:
                entry["initial"] = block.initial
                entry["content"] = user_state.contents.get(block.id, block.initial)
                entry["outcome"] = user_state.outcomes.get(block.id, "unchecked")
                if hasattr(entry["outcome"], "value"):
                    entry["outcome"] = entry["outcome"].value
            else:  # hidden, teacher view only
                entry["code"] = block.code
                entry["hidden"] = True
            blocks.append(entry)
        sections.append({"title": dict(section.title), "blocks": blocks})
    return {
        "id": tutorial.id,
        "title": dict(tutorial.title),
        "course_id": course.id,
        "profile": course.profile_id,
        "sections": sections,
    }


# -- handlers --------------------------------------------------------------------


def _make_routes(state: AppState) -> list:
    def guarded(minimum: str):
        def decorate(fn):
            def handler(request: Request) -> Response:
                try:
                    principal = _require(state, request, minimum)
                    return fn(request, principal)
                except _Deny as deny:
                    return deny.response
                except NotFound as exc:
                    return _error(404, "not-found", str(exc))

            return handler

        return decorate

    @guarded("student")
    def get_courses(request: Request, principal: Principal) -> Response:
        courses = state.registry.list_courses()
        if not principal.has_role("teacher"):
            courses = [c for c in courses if _can_read_course(state, principal, c)]
        return JSONResponse({"courses": [_course_view(state, c, principal) for c in courses]})

    @guarded("teacher")
    def post_courses(request: Request, principal: Principal) -> Response:
        body = _json_body(request)
        action = body.get("action")
        try:
            if action == "create":
                course = Course(
                    id=str(body["id"]),
                    title=str(body.get("title", body["id"])),
                    locales=tuple(body.get("locales", ("en", "de"))),
                    profile_id=str(body.get("profile", "permissive")),
                    tutorial_ids=(),
                    roster=frozenset(body.get("roster", ())),
                    owner_id=principal.user_id,
                )
                if course.profile_id not in state.profiles:
                    return _error(400, "unknown-profile", course.profile_id)
                state.registry.create_course(course)
                _scale_for_rosters(state)
                return JSONResponse(_course_view(state, course, principal), status_code=201)

            course = state.registry.course(str(body.get("id")))
            if not (principal.is_admin or state.registry.is_owner(course, principal.user_id)):
                return _error(403, "forbidden", "only the course owner may modify it")
            if action == "enroll":
                updated = state.registry.enroll(course.id, set(body.get("user_ids", ())))
                _scale_for_rosters(state)
                return JSONResponse(_course_view(state, updated, principal))
            if action == "set-profile":
                profile_id = str(body.get("profile"))
                if profile_id not in state.profiles:
                    return _error(400, "unknown-profile", profile_id)
                updated = state.registry.set_profile(course.id, profile_id)
                return JSONResponse(_course_view(state, updated, principal))
            if action == "update":
                from dataclasses import replace

                updated = replace(
                    course,
                    title=str(body.get("title", course.title)),
                    locales=tuple(body.get("locales", course.locales)),
                )
                state.registry.update_course(updated)
                return JSONResponse(_course_view(state, updated, principal))
            return _error(400, "bad-action", f"unknown action {action!r}")
        except KeyError as exc:
            return _error(400, "bad-request", f"missing field {exc}")
        except RegistryError as exc:
            if isinstance(exc, NotFound):
                raise
            return _error(409, "conflict", str(exc))

    @guarded("student")
    def get_tutorial(request: Request, principal: Principal) -> Response:
        tutorial_id = request.path_params["tutorial_id"]
        tutorial = state.registry.tutorial(tutorial_id)
        course = state.registry.course_of_tutorial(tutorial_id)
        teacher_view = principal.is_admin or state.registry.is_owner(course, principal.user_id)
        if not teacher_view and not state.registry.is_enrolled(course, principal.user_id):
            return _error(403, "not-enrolled", "you are not enrolled in this course")
        return JSONResponse(_tutorial_view(state, tutorial, course, principal, teacher_view))

    @guarded("teacher")
    def post_tutorials(request: Request, principal: Principal) -> Response:
        body = _json_body(request)
        course = state.registry.course(str(body.get("course_id")))
        if not (principal.is_admin or state.registry.is_owner(course, principal.user_id)):
            return _error(403, "forbidden", "only the course owner may upload tutorials")
        document = body.get("document")
        if not isinstance(document, str):
            return _error(400, "bad-request", "document must be the tutorial file text")
        try:
            tutorial = load_tutorial(document, source=body.get("source", "<upload>"))
        except (TutorialFormatError, TutorialValidationError) as exc:
            return _error(400, "format-error", str(exc))
        profile = state.profiles.get(course.profile_id)
        findings = validate_tutorial(tutorial, profile) if profile else []
        if any(f.severity.value == "error" for f in findings):
            return JSONResponse(
                {
                    "error": "validation-failed",
                    "diagnostics": [f.to_dict() for f in findings],
                },
                status_code=400,
            )
        state.registry.add_tutorial(course.id, tutorial)
        return JSONResponse(
            {"id": tutorial.id, "diagnostics": [f.to_dict() for f in findings]}, status_code=201
        )

    @guarded("student")
    def post_checks(request: Request, principal: Principal) -> Response:
        body = _json_body(request)
        try:
            check = CheckRequest.from_json(body)
        except CheckValidationError as exc:
            return _error(400, "bad-request", str(exc))
        course = state.registry.course(check.course_id)
        if check.tutorial_id not in course.tutorial_ids:
            return _error(404, "not-found", f"tutorial {check.tutorial_id!r} not in course")
        tutorial = state.registry.tutorial(check.tutorial_id)
        if not _can_read_course(state, principal, course):
            return _error(403, "not-enrolled", "you are not enrolled in this course")
        try:
            envelope = state.checks.submit(
                principal, course, tutorial, check, _locale(state, request)
            )
        except CheckValidationError as exc:
            return _error(400, "bad-request", str(exc))
        status = 200 if envelope["state"] == "done" else 202
        return JSONResponse(envelope, status_code=status)

    @guarded("student")
    def get_check(request: Request, principal: Principal) -> Response:
        entry = state.checks.results.get(principal.user_id, request.path_params["request_id"])
        if entry is None:
            return _error(404, "not-found", "no such check request")
        return JSONResponse(entry)

    @guarded("student")
    def post_reset(request: Request, principal: Principal) -> Response:
        tutorial_id = request.path_params["tutorial_id"]
        tutorial = state.registry.tutorial(tutorial_id)
        course = state.registry.course_of_tutorial(tutorial_id)
        if not _can_read_course(state, principal, course):
            return _error(403, "not-enrolled", "you are not enrolled in this course")
        current = state.store.get_state(principal.user_id, tutorial.id)
        if current is None:
            current = new_state(tutorial, principal.user_id)
        fresh = reset_progress(current, tutorial)
        state.store.put_state(fresh)
        return JSONResponse(
            {
                "tutorial_id": tutorial.id,
                "contents": dict(fresh.contents),
                "outcomes": {k: v.value for k, v in fresh.outcomes.items()},
            }
        )

    @guarded("student")
    def get_rules(request: Request, principal: Principal) -> Response:
        params = request.query_params
        profile = state.profiles.get("permissive")
        course_id = params.get("course_id")
        if course_id:
            course = state.registry.course(course_id)
            profile = state.profiles.get(course.profile_id, profile)
        entries = state.rules
        query = params.get("q")
        if query:
            entries = search_rules(entries, query)
        entries = list_rules(entries, profile, params.get("category") or None)
        locale = _locale(state, request)
        return JSONResponse({"rules": [e.to_dict(locale) for e in entries]})

    @guarded("student")
    def get_symbols(request: Request, principal: Principal) -> Response:
        query = request.query_params.get("q", "")
        entries = lookup_symbol(state.symbols, query)
        return JSONResponse(
            {
                "symbols": [
                    {
                        "name": e.name,
                        "glyph": e.glyph,
                        "escape": e.escape,
                        "abbreviation": e.abbreviation,
                    }
                    for e in entries
                ]
            }
        )

    @guarded("student")
    def post_tokens(request: Request, principal: Principal) -> Response:
        body = _json_body(request)
        document = body.get("document")
        if not isinstance(document, str):
            return _error(400, "bad-request", "document must be a string")
        return JSONResponse(
            {
                "tokens": [
                    {"kind": t.kind.value, "start": t.span.start, "end": t.span.end}
                    for t in tokenize(document)
                ]
            }
        )

    @guarded("admin")
    def get_admin_pool(request: Request, principal: Principal) -> Response:
        return JSONResponse(
            {
                "instances": [i.to_dict() for i in state.pool.status()],
                "degraded": state.pool.degraded,
                "acquired_total": state.pool.acquired_total,
                "released_total": state.pool.released_total,
            }
        )

    @guarded("admin")
    def post_admin_scale(request: Request, principal: Principal) -> Response:
        body = _json_body(request)
        target = body.get("target")
        if not isinstance(target, int):
            return _error(400, "bad-request", "target must be an integer")
        try:
            state.pool.scale(target)
        except ScaleRangeError as exc:
            return _error(400, exc.code, str(exc))
        return JSONResponse({"instances": [i.to_dict() for i in state.pool.status()]})

    @guarded("admin")
    def delete_admin_user(request: Request, principal: Principal) -> Response:
        user_id = request.path_params["user_id"]
        try:
            state.store.delete_user(user_id)
        except UnknownUser:
            return _error(404, "unknown-user", user_id)
        return JSONResponse({"deleted": user_id})

    @guarded("teacher")
    def get_export(request: Request, principal: Principal) -> Response:
        params = request.query_params
        records = state.store.export_history(
            course_id=params.get("course"),
            tutorial_id=params.get("tutorial"),
            since=params.get("since"),
            until=params.get("until"),
        )
        lines = "".join(
            json.dumps(r.to_export_record(), ensure_ascii=False) + "\n" for r in records
        )
        return PlainTextResponse(lines, media_type="application/x-ndjson")

    async def stream(websocket: WebSocket) -> None:
        await websocket.accept()
        principal: Principal | None = None
        authorization = websocket.headers.get("authorization")
        try:
            if authorization:
                principal = _authenticate(state, authorization)
            else:
                handshake = await asyncio.wait_for(websocket.receive_json(), timeout=5)
                principal = _authenticate(state, f"Bearer {handshake.get('token', '')}")
        except (_Deny, asyncio.TimeoutError, json.JSONDecodeError, KeyError):
            await websocket.close(code=1008)
            return
        except WebSocketDisconnect:
            return

        inbox = state.checks.hub.subscribe(principal.user_id)
        await websocket.send_json(
            {"type": "notice", "request_id": None, "payload": {"status": "connected"}}
        )
        receiver = asyncio.ensure_future(websocket.receive())
        try:
            while True:
                while True:
                    try:
                        item = inbox.get_nowait()
                    except queue.Empty:
                        break
                    await websocket.send_json(item)
                pause = asyncio.ensure_future(asyncio.sleep(0.02))
                done, _ = await asyncio.wait({receiver, pause}, return_when=asyncio.FIRST_COMPLETED)
                if receiver in done:
                    message = receiver.result()
                    if message.get("type") == "websocket.disconnect":
                        break
                    receiver = asyncio.ensure_future(websocket.receive())
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            receiver.cancel()
            state.checks.hub.unsubscribe(principal.user_id, inbox)

    return [
        Route("/v1/courses", get_courses, methods=["GET"]),
        Route("/v1/courses", post_courses, methods=["POST"]),
        Route("/v1/tutorials/{tutorial_id}", get_tutorial, methods=["GET"]),
        Route("/v1/tutorials", post_tutorials, methods=["POST"]),
        Route("/v1/checks", post_checks, methods=["POST"]),
        Route("/v1/checks/{request_id}", get_check, methods=["GET"]),
        Route("/v1/progress/{tutorial_id}/reset", post_reset, methods=["POST"]),
        Route("/v1/rules", get_rules, methods=["GET"]),
        Route("/v1/symbols", get_symbols, methods=["GET"]),
        Route("/v1/tokens", post_tokens, methods=["POST"]),
        Route("/v1/admin/pool", get_admin_pool, methods=["GET"]),
        Route("/v1/admin/pool/scale", post_admin_scale, methods=["POST"]),
        Route("/v1/admin/users/{user_id}", delete_admin_user, methods=["DELETE"]),
        Route("/v1/export", get_export, methods=["GET"]),
        WebSocketRoute("/v1/stream", stream),
    ]


def create_app(state: AppState) -> Starlette:
    import contextlib

    @contextlib.asynccontextmanager
    async def lifespan(app: Starlette):
        yield
        state.close()

    app = Starlette(routes=_make_routes(state), lifespan=lifespan)
    app.state.proofbench = state
    return app
