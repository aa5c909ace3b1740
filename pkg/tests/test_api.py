"""API service: endpoints, views, the check pipeline, and the stream."""

from __future__ import annotations

import threading
import time

import pytest

from .harness import (
    create_fixture_course,
    load_conjunction_fixtures,
    load_conjunction_solutions,
    make_service,
)


@pytest.fixture()
def service():
    with make_service() as s:
        create_fixture_course(s)
        yield s


GOOD_SWAP = (
    'lemma and_swap: "A ∧ B ⟹ B ∧ A"\n'
    "  apply (rule andI)\n"
    "   apply (erule andE)\n"
    "   apply assumption\n"
    "  apply (erule andE)\n"
    "  apply assumption\n"
    "  done"
)


def submit(service, blocks, request_id, role="student", sub="student-1", expect=202):
    response = service.client.post(
        "/v1/checks",
        headers=service.headers(role, sub),
        json={
            "course_id": "logic101",
            "tutorial_id": "conjunction",
            "request_id": request_id,
            "blocks": blocks,
        },
    )
    assert response.status_code == expect, response.text
    return response.json()


# -- courses and tutorials -------------------------------------------------------


def test_course_listing_by_role(service):
    enrolled = service.client.get("/v1/courses", headers=service.headers("student", "student-1"))
    assert [c["id"] for c in enrolled.json()["courses"]] == ["logic101"]
    outsider = service.client.get("/v1/courses", headers=service.headers("student", "stranger"))
    assert outsider.json()["courses"] == []
    teacher = service.client.get("/v1/courses", headers=service.headers("teacher"))
    assert len(teacher.json()["courses"]) == 1


def test_student_view_hides_hidden_blocks(service):
    view = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("student", "student-1")
    ).json()
    kinds = [b["kind"] for s in view["sections"] for b in s["blocks"]]
    assert "hidden" not in kinds
    assert kinds.count("task") == 5


def test_teacher_view_flags_hidden_blocks(service):
    view = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("teacher")
    ).json()
    hidden = [b for s in view["sections"] for b in s["blocks"] if b["kind"] == "hidden"]
    assert hidden and all(b["hidden"] is True for b in hidden)


def test_unenrolled_student_cannot_read_tutorial(service):
    response = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("student", "stranger")
    )
    assert response.status_code == 403


def test_unknown_tutorial_404(service):
    response = service.client.get(
        "/v1/tutorials/ghost", headers=service.headers("student", "student-1")
    )
    assert response.status_code == 404


def test_upload_rejects_format_errors(service):
    response = service.client.post(
        "/v1/tutorials",
        headers=service.headers("teacher"),
        json={"course_id": "logic101", "document": "id = ???"},
    )
    assert response.status_code == 400
    assert response.json()["error"] == "format-error"


def test_upload_rejects_restriction_violations_with_diagnostics(service):
    document = """
id = "bad"
[title]
en = "Bad"
[header]
theory = "Bad"
[footer]
text = "end"
[[section]]
[[section.block]]
id = "t"
kind = "task"
initial = 'lemma a: "A" by auto'
"""
    response = service.client.post(
        "/v1/tutorials",
        headers=service.headers("teacher"),
        json={"course_id": "logic101", "document": document},
    )
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "validation-failed"
    assert body["diagnostics"][0]["code"] == "forbidden-method"


def test_non_owner_teacher_cannot_upload(service):
    response = service.client.post(
        "/v1/tutorials",
        headers=service.headers("teacher", "other-teacher"),
        json={"course_id": "logic101", "document": "x"},
    )
    assert response.status_code == 403


def test_course_sizing_on_create_and_enroll(service):
    # fixture course has 1 student; the pool stays at the configured initial
    assert service.state.pool.live_instance_count() == 2
    service.client.post(
        "/v1/courses",
        headers=service.headers("teacher"),
        json={"action": "enroll", "id": "logic101", "user_ids": [f"s{i}" for i in range(30)]},
    )
    # 31 enrolled -> ceil(31/25)=2 pairs -> 4 instances
    assert service.state.pool.live_instance_count() == 4


# -- checks -----------------------------------------------------------------------


def test_blocked_check_stops_before_prover_and_records_no_diff(service):
    acquired_before = service.state.pool.acquired_total
    envelope = submit(service, {"task-swap": 'lemma x: "A" by auto'}, "blocked-1", expect=200)
    assert envelope["state"] == "done"
    result = service.wait_check("student", "student-1", "blocked-1")
    assert result["status"] == "restricted"
    assert result["diagnostics"][0]["code"] == "forbidden-method"
    assert service.state.pool.acquired_total == acquired_before  # no session used
    # diffs were not recorded for the blocked submission
    assert list(service.state.store.iter_diffs()) == []


def test_successful_check_marks_outcome_ok(service):
    submit(service, {"task-swap": GOOD_SWAP}, "ok-1")
    result = service.wait_check("student", "student-1", "ok-1")
    assert result["status"] == "finished-ok"
    assert result["outcomes"] == {"task-swap": "ok"}
    view = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("student", "student-1")
    ).json()
    swap = next(
        b for s in view["sections"] for b in s["blocks"] if b.get("id") == "task-swap"
    )
    assert swap["outcome"] == "ok" and swap["content"] == GOOD_SWAP


def test_failed_check_yields_block_scoped_feedback(service):
    submit(service, {"task-swap": 'lemma and_swap: "A ∧ B ⟹ B ∧ A"\n  sorry'}, "fail-1")
    result = service.wait_check("student", "student-1", "fail-1")
    assert result["status"] == "finished-failed"
    (item,) = [f for f in result["feedback"] if f["severity"] == "error"]
    assert item["origin_kind"] == "block"
    assert item["block_id"] == "task-swap"
    local = item["local_span"]
    assert 0 <= local["start"] < local["end"]  # block-local offsets only
    assert result["outcomes"] == {"task-swap": "failed"}


def test_response_spans_are_block_local(service):
    long_prefix = 'lemma and_of_two: "A ⟹ B ⟹ A ∧ B"\n  sorry'
    submit(service, {"task-intro-1": long_prefix}, "local-1")
    result = service.wait_check("student", "student-1", "local-1")
    (item,) = [f for f in result["feedback"] if f["severity"] == "error"]
    # `sorry` sits at byte 37.. in the block; an assembled-theory offset
    # would be hundreds of bytes in
    assert item["local_span"]["start"] < len(long_prefix.encode())


def test_proof_states_are_block_scoped(service):
    submit(service, {"task-elim-1": 'lemma and_left: "A ∧ B ⟹ A"\n  apply (erule andE)\n  apply assumption\n  done'}, "st-1")
    result = service.wait_check("student", "student-1", "st-1")
    assert result["proof_states"], "structural mode emits synthetic states"
    view = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("student", "student-1")
    ).json()
    visible = {b["id"] for s in view["sections"] for b in s["blocks"] if b["kind"] in ("task", "example")}
    for state in result["proof_states"]:
        assert state["block_id"] in visible  # never a hidden block
        assert state["position"] >= 0
    assert any(s["block_id"] == "task-elim-1" for s in result["proof_states"])


def test_unknown_block_rejected(service):
    response = service.client.post(
        "/v1/checks",
        headers=service.headers("student", "student-1"),
        json={
            "course_id": "logic101",
            "tutorial_id": "conjunction",
            "request_id": "bad-1",
            "blocks": {"nonexistent": "x"},
        },
    )
    assert response.status_code == 400


def test_check_results_are_private_per_user(service):
    submit(service, {"task-swap": GOOD_SWAP}, "priv-1")
    service.wait_check("student", "student-1", "priv-1")
    other = service.client.get(
        "/v1/checks/priv-1", headers=service.headers("student", "stranger")
    )
    assert other.status_code == 404


def test_sequential_checks_pipeline_in_order(service):
    for i in range(3):
        submit(service, {"task-swap": GOOD_SWAP + f"\n(* v{i} *)"}, f"seq-{i}")
    for i in range(3):
        service.wait_check("student", "student-1", f"seq-{i}")
    stream = service.state.store._stream("student-1", "conjunction", "task-swap")
    assert [d.seq for d in stream] == [1, 2, 3]


def _cap_one(config):
    config.pool_session_cap = 1


def test_pool_exhaustion_reports_distinct_code():
    with make_service(pool_initial=1, pool_max=1, configure=_cap_one) as service:
        create_fixture_course(service, roster=("student-1", "student-2"))
        # a foreign user's lease occupies the only slot
        service.state.checks.sessions.lease("student-2", "logic101")
        submit(service, {"task-swap": GOOD_SWAP}, "full-1")
        result = service.wait_check("student", "student-1", "full-1")
        assert result["status"] == "pool-exhausted"
        assert result["error_code"] == "all-at-capacity"
        # the diff was recorded before the pool was consulted
        assert len(list(service.state.store.iter_diffs())) == 1


def test_reset_progress_endpoint(service):
    submit(service, {"task-swap": GOOD_SWAP}, "reset-1")
    service.wait_check("student", "student-1", "reset-1")
    response = service.client.post(
        "/v1/progress/conjunction/reset", headers=service.headers("student", "student-1")
    )
    assert response.status_code == 200
    body = response.json()
    assert body["contents"]["task-swap"].startswith("lemma and_swap")
    assert set(body["outcomes"].values()) == {"unchecked"}
    view = service.client.get(
        "/v1/tutorials/conjunction", headers=service.headers("student", "student-1")
    ).json()
    swap = next(b for s in view["sections"] for b in s["blocks"] if b.get("id") == "task-swap")
    assert swap["content"] == swap["initial"]


# -- rules, symbols, tokens --------------------------------------------------------


def test_rules_endpoint_filters_by_course_profile(service):
    response = service.client.get(
        "/v1/rules", params={"q": "andI"}, headers=service.headers("student", "student-1")
    )
    (rule,) = response.json()["rules"]
    assert rule["prover_name"] == "conjI"
    localized = service.client.get(
        "/v1/rules", params={"q": "andI", "locale": "de"}, headers=service.headers("student", "student-1")
    ).json()["rules"][0]
    assert localized["description"] != rule["description"]


def test_symbols_endpoint(service):
    response = service.client.get(
        "/v1/symbols", params={"q": "and"}, headers=service.headers("student", "student-1")
    )
    names = [s["name"] for s in response.json()["symbols"]]
    assert "and" in names
    everything = service.client.get("/v1/symbols", headers=service.headers("student", "student-1"))
    assert len(everything.json()["symbols"]) >= 30


def test_tokens_endpoint_returns_highlight_map(service):
    response = service.client.post(
        "/v1/tokens",
        headers=service.headers("student", "student-1"),
        json={"document": "lemma x: \"A\""},
    )
    tokens = response.json()["tokens"]
    assert tokens[0] == {"kind": "command", "start": 0, "end": 5}


# -- admin --------------------------------------------------------------------------


def test_pool_admin_status_and_scale(service):
    status = service.client.get("/v1/admin/pool", headers=service.headers("admin")).json()
    assert len(status["instances"]) == 2
    assert all(i["state"] == "healthy" for i in status["instances"])
    response = service.client.post(
        "/v1/admin/pool/scale", headers=service.headers("admin"), json={"target": 4}
    )
    live = [i for i in response.json()["instances"] if i["state"] in ("healthy", "starting")]
    assert len(live) == 4
    bad = service.client.post(
        "/v1/admin/pool/scale", headers=service.headers("admin"), json={"target": 0}
    )
    assert bad.status_code == 400


def test_delete_user_then_404_on_second_delete(service):
    submit(service, {"task-swap": GOOD_SWAP}, "del-1")
    service.wait_check("student", "student-1", "del-1")
    assert service.client.delete(
        "/v1/admin/users/student-1", headers=service.headers("admin")
    ).status_code == 200
    assert service.client.delete(
        "/v1/admin/users/student-1", headers=service.headers("admin")
    ).status_code == 404


def test_export_stream_format(service):
    submit(service, {"task-swap": GOOD_SWAP}, "exp-1")
    service.wait_check("student", "student-1", "exp-1")
    import json as json_module

    response = service.client.get("/v1/export", headers=service.headers("teacher"))
    lines = [l for l in response.text.splitlines() if l.strip()]
    assert len(lines) == 1
    record = json_module.loads(lines[0])
    assert set(record) == {"user_id", "course_id", "tutorial_id", "block_id", "seq", "ts", "ops"}
    assert record["user_id"] == "student-1"
    filtered = service.client.get(
        "/v1/export", params={"course": "other"}, headers=service.headers("teacher")
    )
    assert filtered.text.strip() == ""


# -- stream -----------------------------------------------------------------------


def test_stream_delivers_correlated_results(service):
    with service.client.websocket_connect(
        "/v1/stream", headers=service.headers("student", "student-1")
    ) as ws:
        notice = ws.receive_json()
        assert notice["type"] == "notice"
        submit(service, {"task-swap": GOOD_SWAP}, "ws-1")
        submit(service, {"task-swap": GOOD_SWAP + "\n(* again *)"}, "ws-2")
        first = ws.receive_json()
        second = ws.receive_json()
        assert [first["request_id"], second["request_id"]] == ["ws-1", "ws-2"]
        assert first["type"] == "check-result"
        assert first["payload"]["status"] == "finished-ok"


def test_stream_handshake_with_first_message_token(service):
    with service.client.websocket_connect("/v1/stream") as ws:
        ws.send_json({"token": service.token("student", "student-1")})
        notice = ws.receive_json()
        assert notice["payload"]["status"] == "connected"


def test_stream_rejects_bad_token(service):
    with pytest.raises(Exception):
        with service.client.websocket_connect("/v1/stream") as ws:
            ws.send_json({"token": "garbage"})
            ws.receive_json()


# -- fixture-mode end to end --------------------------------------------------------


def test_fixture_mode_end_to_end_with_bundled_solutions():
    fixtures = load_conjunction_fixtures()
    solutions = load_conjunction_solutions()
    with make_service(prover_mode="fixture", fixtures=fixtures) as service:
        create_fixture_course(service)
        submit(service, solutions["correct"], "fx-ok")
        result = service.wait_check("student", "student-1", "fx-ok")
        assert result["status"] == "finished-ok"
        assert result["outcomes"]["task-swap"] == "ok"

        submit(service, solutions["broken"], "fx-broken")
        result = service.wait_check("student", "student-1", "fx-broken")
        assert result["status"] == "finished-failed"
        (item,) = [f for f in result["feedback"] if f["severity"] == "error"]
        assert item["block_id"] == "task-swap"
        assert "Failed to apply initial proof method" in item["raw_text"]
        assert len(item["hints"]) == 3
