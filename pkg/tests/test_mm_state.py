import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexmob.errors import StateMachineError
from hexmob.hexgrid import hop_distance, la_of
from hexmob.mm_state import (
    COVERAGE_LOST,
    READY_TIMER_EXPIRY,
    SESSION_END,
    SESSION_START,
    STANDBY_TIMER_EXPIRY,
    EventKind,
    MMEvent,
    TimerConfig,
    advance_timers,
    attach,
    handle_event,
)
from hexmob.schemes import SchemeConfig
from hexmob.station import MMState, Trigger
from helpers import station

DIST = SchemeConfig.distance(2)
LA = SchemeConfig.location_area()
TIMERS = TimerConfig(ready=100.0, standby=2000.0)


def test_exactly_three_states():
    assert {s.name for s in MMState} == {"IDLE", "READY", "STANDBY"}


def test_attach_from_idle(grid28):
    ms = station(grid28, MMState.IDLE, cell=3)
    ms, rec = attach(ms, 3, grid28, now=7.0, timers=TIMERS)
    assert ms.state is MMState.READY
    assert ms.anchor_cell == 3
    assert ms.registered_la == la_of(grid28, 3)
    assert ms.attaches == 1
    assert ms.ready_timer_remaining == 100.0
    assert hop_distance(grid28.coord(ms.current_cell), grid28.coord(ms.anchor_cell)) == 0
    assert rec.trigger is Trigger.ATTACH and rec.cell_id == 3 and rec.time == 7.0
    assert rec.state_at_trigger is MMState.READY


def test_attach_when_not_idle_is_error(grid28):
    with pytest.raises(StateMachineError):
        attach(station(grid28, MMState.READY), 3, grid28)


def test_ready_timer_expiry_goes_standby(grid28):
    ms, recs = handle_event(station(grid28, MMState.READY), READY_TIMER_EXPIRY, DIST, grid28, 1.0, TIMERS)
    assert ms.state is MMState.STANDBY and recs == []
    assert ms.standby_timer_remaining == 2000.0


def test_standby_timer_expiry_goes_idle(grid28):
    ms, recs = handle_event(station(grid28, MMState.STANDBY), STANDBY_TIMER_EXPIRY, DIST, grid28, 1.0)
    assert ms.state is MMState.IDLE and recs == []
    assert ms.anchor_cell is None and ms.registered_la is None
    assert ms.current_cell == 3


def test_session_start_from_standby(grid28):
    ms, recs = handle_event(station(grid28, MMState.STANDBY), SESSION_START, DIST, grid28, 1.0, TIMERS)
    assert ms.state is MMState.READY and recs == []
    assert ms.ready_timer_remaining == 100.0


def test_session_end_rearms_ready_timer(grid28):
    ms = station(grid28, MMState.READY)
    ms, _ = advance_timers(ms, 30.0)
    assert ms.ready_timer_remaining == 70.0
    ms, recs = handle_event(ms, SESSION_END, DIST, grid28, 1.0, TIMERS)
    assert ms.state is MMState.READY and ms.ready_timer_remaining == 100.0 and recs == []


def test_session_start_from_idle_in_coverage_attaches(grid28):
    ms, recs = handle_event(station(grid28, MMState.IDLE, cell=5), SESSION_START, DIST, grid28, 2.0)
    assert ms.state is MMState.READY and [r.trigger for r in recs] == [Trigger.ATTACH]


@pytest.mark.parametrize("state", list(MMState))
def test_coverage_lost_goes_idle_silently(grid28, state):
    ms, recs = handle_event(station(grid28, state), COVERAGE_LOST, DIST, grid28, 1.0)
    assert ms.state is MMState.IDLE and recs == []
    assert ms.current_cell is None and ms.anchor_cell is None


@pytest.mark.parametrize("state", list(MMState))
def test_lost_then_regained_reattaches_at_entry_cell(grid28, state):
    ms, _ = handle_event(station(grid28, state, cell=2), COVERAGE_LOST, DIST, grid28, 1.0)
    ms, recs = handle_event(ms, MMEvent.coverage_regained(20), DIST, grid28, 2.0)
    assert ms.state is MMState.READY and ms.anchor_cell == 20 and ms.current_cell == 20
    assert len(recs) == 1 and recs[0].trigger is Trigger.ATTACH


def test_idle_cell_change_emits_nothing(grid28):
    ms, recs = handle_event(station(grid28, MMState.IDLE, cell=3), MMEvent.cell_changed(4), DIST, grid28, 1.0)
    assert ms.state is MMState.IDLE and recs == [] and ms.current_cell == 4


def test_ready_cell_change_counts_cell_update(grid28):
    ms, recs = handle_event(station(grid28, MMState.READY, cell=3), MMEvent.cell_changed(4), DIST, grid28, 1.0)
    assert ms.cell_updates == 1 and recs == []
    ms, recs = handle_event(ms, MMEvent.cell_changed(5), DIST, grid28, 2.0)
    assert ms.cell_updates == 2 and len(recs) == 1
    assert recs[0].state_at_trigger is MMState.READY
    assert ms.hlr_updates_ready == 1 and ms.anchor_cell == 5


def test_standby_threshold_update_tagged_standby(grid28):
    ms = station(grid28, MMState.STANDBY, cell=3)
    ms, recs = handle_event(ms, MMEvent.cell_changed(5), DIST, grid28, 1.0)
    assert ms.cell_updates == 0
    assert [r.state_at_trigger for r in recs] == [MMState.STANDBY]
    assert ms.hlr_updates_standby == 1


def test_unknown_combination_is_noop(grid28):
    ms = station(grid28, MMState.IDLE)
    out, recs = handle_event(ms, READY_TIMER_EXPIRY, DIST, grid28, 1.0)
    assert out == ms and recs == []


def test_timers_pause_in_session_and_fire(grid28):
    ms = station(grid28, MMState.READY)
    same, evs = advance_timers(ms, 1.0, in_session=True)
    assert same.ready_timer_remaining == ms.ready_timer_remaining and evs == []
    for _ in range(99):
        ms, evs = advance_timers(ms, 1.0)
        assert evs == []
    ms, evs = advance_timers(ms, 1.0)
    assert evs == [READY_TIMER_EXPIRY]


def _random_event(rnd, n_cells):
    kind = rnd.choice(list(EventKind))
    if kind in (EventKind.CELL_CHANGED, EventKind.COVERAGE_REGAINED):
        return MMEvent(kind, rnd.randrange(n_cells))
    return MMEvent(kind)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([DIST, LA, SchemeConfig.distance(1), SchemeConfig.distance(3)]))
def test_random_sequences_respect_invariants(grid28, seed, scheme):
    rnd = random.Random(seed)
    ms = station(grid28, rnd.choice(list(MMState)), cell=rnd.randrange(28))
    ready_prev = ms.ready_timer_remaining
    for t in range(200):
        ev = _random_event(rnd, 28)
        if ev.kind is EventKind.COVERAGE_REGAINED and ms.current_cell is not None:
            ev = COVERAGE_LOST
        before = ms.state
        ms, recs = handle_event(ms, ev, scheme, grid28, float(t))
        assert ms.state in MMState
        assert (ms.state is MMState.IDLE) == (ms.anchor_cell is None and ms.registered_la is None)
        for r in recs:
            assert r.state_at_trigger is not MMState.IDLE
        if before is MMState.IDLE and ev.kind is EventKind.CELL_CHANGED:
            assert recs == []
        ms, _ = advance_timers(ms, 1.0)
        if ms.state is MMState.READY and ev.kind not in (EventKind.SESSION_END,):
            # timers only ever count down between arming events
            assert ms.ready_timer_remaining <= max(ready_prev, 100.0)
        ready_prev = ms.ready_timer_remaining
