"""Pool supervision: balancing, capacity, health, scaling, conservation."""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from proofbench.prover import (
    InProcessMockLauncher,
    LaunchError,
    NoHealthyInstance,
    Pool,
    PoolConfig,
    PoolSaturated,
    ScaleRangeError,
    ScriptedLauncher,
    SessionHandle,
    StaleSession,
    instances_for_roster,
)
from proofbench.prover.pool import InstanceState


def make_pool(initial=2, maximum=6, cap=10, launcher=None, **kwargs):
    launcher = launcher or InProcessMockLauncher(mode="fixture")
    config = PoolConfig(
        initial_instances=initial,
        max_instances=maximum,
        session_cap=cap,
        startup_timeout=5.0,
        heartbeat_failure_threshold=2,
        timeout_strikes_threshold=2,
        **kwargs,
    )
    return Pool(config, launcher), launcher


@pytest.fixture()
def pool_and_launcher():
    pool, launcher = make_pool()
    yield pool, launcher
    pool.close()
    launcher.stop_all()


def test_init_launches_initial_instances(pool_and_launcher):
    pool, _ = pool_and_launcher
    states = [i.state for i in pool.status()]
    assert states == [InstanceState.HEALTHY, InstanceState.HEALTHY]
    assert not pool.degraded


def test_single_instance_pool():
    pool, launcher = make_pool(initial=1, maximum=1)
    try:
        assert len(pool.status()) == 1
    finally:
        pool.close()
        launcher.stop_all()


def test_partial_launch_failure_starts_degraded():
    inner = InProcessMockLauncher(mode="fixture")
    scripted = ScriptedLauncher(inner, fail_launches={2})
    config = PoolConfig(initial_instances=3, max_instances=3, startup_timeout=3.0)
    pool = Pool(config, scripted)
    try:
        states = sorted(i.state.value for i in pool.status())
        assert states.count("healthy") == 2
        assert states.count("stopped") == 1
        assert pool.degraded
    finally:
        pool.close()
        inner.stop_all()


def test_total_launch_failure_raises():
    inner = InProcessMockLauncher(mode="fixture")
    scripted = ScriptedLauncher(inner, fail_launches={1, 2})
    with pytest.raises(LaunchError):
        Pool(PoolConfig(initial_instances=2, max_instances=2, startup_timeout=2.0), scripted)
    inner.stop_all()


def test_least_loaded_selection_and_tie_break(pool_and_launcher):
    pool, _ = pool_and_launcher
    first = pool.acquire_session()
    assert first.instance_id == 0  # tie on (0, 0) broken by lowest id
    second = pool.acquire_session()
    assert second.instance_id == 1  # now least-loaded
    third = pool.acquire_session()
    assert third.instance_id == 0
    for handle in (first, second, third):
        pool.release_session(handle)


def test_sequential_acquisitions_balance_exactly():
    pool, launcher = make_pool(initial=4, maximum=4, cap=30)
    try:
        for _ in range(100):
            pool.acquire_session()
        counts = [i.active_sessions for i in pool.status()]
        assert counts == [25, 25, 25, 25]
    finally:
        pool.close()
        launcher.stop_all()


def test_release_returns_counts_and_double_release_is_noop(pool_and_launcher):
    pool, _ = pool_and_launcher
    before = [i.active_sessions for i in pool.status()]
    handle = pool.acquire_session()
    pool.release_session(handle)
    assert [i.active_sessions for i in pool.status()] == before
    pool.release_session(handle)  # no-op
    assert [i.active_sessions for i in pool.status()] == before
    assert pool.acquired_total == pool.released_total == 1


def test_capacity_errors_are_distinct(pool_and_launcher):
    pool, _ = pool_and_launcher
    handles = [pool.acquire_session() for _ in range(20)]  # 2 instances * cap 10
    with pytest.raises(PoolSaturated):
        pool.acquire_session()
    for handle in handles:
        pool.release_session(handle)
    with pool._lock:  # simulate a fully unhealthy pool
        for member in pool._members.values():
            member.state = InstanceState.UNHEALTHY
    with pytest.raises(NoHealthyInstance):
        pool.acquire_session()


def test_check_on_stale_session_raises(pool_and_launcher):
    pool, _ = pool_and_launcher
    handle = pool.acquire_session()
    pool.release_session(handle)
    with pytest.raises(StaleSession):
        pool.check_theory(handle, "theory", timeout=2)


def test_timeout_invalidates_session_and_strikes():
    launcher = InProcessMockLauncher(mode="fixture", fail_after=0)
    pool, _ = make_pool(initial=1, maximum=1, launcher=launcher)
    try:
        handle = pool.acquire_session()
        result = pool.check_theory(handle, "theory", timeout=0.3)
        assert result.status == "timeout"
        # session was torn down with the timeout
        with pytest.raises(StaleSession):
            pool.check_theory(handle, "theory", timeout=0.3)
        assert pool.total_active_sessions() == 0
        handle2 = pool.acquire_session()
        result2 = pool.check_theory(handle2, "theory", timeout=0.3)
        assert result2.status == "timeout"
        # two strikes trip the threshold
        assert pool.status()[0].state is InstanceState.UNHEALTHY
    finally:
        pool.close()
        launcher.stop_all()


def test_health_sweep_marks_silent_instance_unhealthy_then_restarts():
    pool, launcher = make_pool(initial=2, maximum=2)
    try:
        launcher.server_for(1).muted = True
        pool.health_sweep()
        assert pool.status()[1].state is not InstanceState.UNHEALTHY  # one miss only
        pool.health_sweep()
        # threshold of 2 reached; the same sweep restarts it with a fresh,
        # unmuted server, so it is healthy again
        assert pool.status()[1].state is InstanceState.HEALTHY
        handle = pool.acquire_session()
        assert handle is not None
        pool.release_session(handle)
    finally:
        pool.close()
        launcher.stop_all()


def test_unhealthy_instance_excluded_from_acquire():
    pool, launcher = make_pool(initial=2, maximum=2)
    try:
        with pool._lock:
            pool._members[0].state = InstanceState.UNHEALTHY
        for _ in range(3):
            handle = pool.acquire_session()
            assert handle.instance_id == 1
    finally:
        pool.close()
        launcher.stop_all()


def test_scale_up_launches(pool_and_launcher):
    pool, _ = pool_and_launcher
    pool.scale(4)
    assert pool.live_instance_count() == 4
    assert all(i.state is InstanceState.HEALTHY for i in pool.status() if not i.draining)


def test_scale_down_stops_highest_id_idle_instances(pool_and_launcher):
    pool, _ = pool_and_launcher
    pool.scale(4)
    pool.scale(2)
    snapshot = {i.id: i.state for i in pool.status()}
    assert snapshot[0] is InstanceState.HEALTHY
    assert snapshot[1] is InstanceState.HEALTHY
    assert snapshot[2] is InstanceState.STOPPED
    assert snapshot[3] is InstanceState.STOPPED


def test_scale_down_drains_busy_instances():
    pool, launcher = make_pool(initial=2, maximum=2, cap=4)
    try:
        handles = [pool.acquire_session() for _ in range(4)]
        busy_high = [h for h in handles if h.instance_id == 1]
        pool.scale(1)
        status = {i.id: i for i in pool.status()}
        assert status[1].draining and status[1].state is InstanceState.HEALTHY
        # draining instances accept no new sessions
        for _ in range(2):
            assert pool.acquire_session().instance_id == 0
        for handle in busy_high:
            pool.release_session(handle)
        status = {i.id: i for i in pool.status()}
        assert status[1].state is InstanceState.STOPPED
    finally:
        pool.close()
        launcher.stop_all()


def test_scale_range_errors(pool_and_launcher):
    pool, _ = pool_and_launcher
    with pytest.raises(ScaleRangeError):
        pool.scale(0)
    with pytest.raises(ScaleRangeError):
        pool.scale(7)


def test_conservation_under_concurrent_storm():
    pool, launcher = make_pool(initial=3, maximum=3, cap=40)
    errors: list[Exception] = []

    def cycle(_):
        try:
            handle = pool.acquire_session()
            time.sleep(0.001)
            pool.release_session(handle)
        except Exception as exc:  # saturation would be a test failure
            errors.append(exc)

    try:
        with ThreadPoolExecutor(max_workers=16) as executor:
            list(executor.map(cycle, range(120)))
        assert errors == []
        assert pool.total_active_sessions() == 0
        assert pool.acquired_total == pool.released_total == 120
        assert all(0 <= i.active_sessions <= 40 for i in pool.status())
    finally:
        pool.close()
        launcher.stop_all()


def test_subprocess_launcher_round_trip():
    from proofbench.prover import SubprocessMockLauncher
    from proofbench.prover.client import ProverClient

    launcher = SubprocessMockLauncher(mode="structural")
    instance = launcher.launch(0)
    try:
        client = ProverClient(*instance.endpoint)
        assert client.ping()
        session = client.session_start()
        reply = client.use_theories(session, 'lemma l: "A"\n  sorry', timeout=10)
        assert reply["status"] == "failed"
        client.close()
    finally:
        instance.stop()


def test_static_endpoint_launcher_attaches_to_external_servers():
    from proofbench.prover import StaticEndpointLauncher
    from proofbench.prover.mock_server import MockProverServer

    external = MockProverServer(mode="fixture").start()
    try:
        launcher = StaticEndpointLauncher([external.endpoint])
        pool = Pool(PoolConfig(initial_instances=1, max_instances=1), launcher)
        handle = pool.acquire_session()
        result = pool.check_theory(handle, "theory", timeout=5)
        assert result.status == "finished-ok"
        pool.release_session(handle)
        pool.close()
    finally:
        external.stop()


def test_sizing_pairing_rule():
    config = PoolConfig()
    assert instances_for_roster(config, 0) == 2
    assert instances_for_roster(config, 1) == 2
    assert instances_for_roster(config, 25) == 2
    assert instances_for_roster(config, 26) == 4
    assert instances_for_roster(config, 50) == 4
    assert instances_for_roster(config, 51) == 6
    # capped at the configured maximum
    assert instances_for_roster(config, 10_000) == config.max_instances
