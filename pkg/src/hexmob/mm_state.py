"""GPRS mobility-management state machine (IDLE / READY / STANDBY).

Transitions are pure: every function returns a new :class:`MobileStation`
together with whatever HLR records the transition produced.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from .errors import StateMachineError
from .hexgrid import Grid, la_of
from .schemes import SchemeConfig, check_update
from .station import MMState, MobileStation, TimerConfig, Trigger, UpdateRecord

__all__ = [
    "MMState",
    "MobileStation",
    "TimerConfig",
    "EventKind",
    "MMEvent",
    "attach",
    "handle_event",
    "advance_timers",
]

log = logging.getLogger(__name__)

DEFAULT_TIMERS = TimerConfig()


class EventKind(enum.Enum):
    SESSION_START = "SessionStart"
    SESSION_END = "SessionEnd"
    READY_TIMER_EXPIRY = "ReadyTimerExpiry"
    STANDBY_TIMER_EXPIRY = "StandbyTimerExpiry"
    COVERAGE_LOST = "CoverageLost"
    COVERAGE_REGAINED = "CoverageRegained"
    CELL_CHANGED = "CellChanged"


@dataclass(frozen=True)
class MMEvent:
    kind: EventKind
    # entered cell for CELL_CHANGED and COVERAGE_REGAINED
    cell: Optional[int] = None

    @classmethod
    def cell_changed(cls, cell: int) -> "MMEvent":
        return cls(EventKind.CELL_CHANGED, cell)

    @classmethod
    def coverage_regained(cls, cell: int) -> "MMEvent":
        return cls(EventKind.COVERAGE_REGAINED, cell)


SESSION_START = MMEvent(EventKind.SESSION_START)
SESSION_END = MMEvent(EventKind.SESSION_END)
READY_TIMER_EXPIRY = MMEvent(EventKind.READY_TIMER_EXPIRY)
STANDBY_TIMER_EXPIRY = MMEvent(EventKind.STANDBY_TIMER_EXPIRY)
COVERAGE_LOST = MMEvent(EventKind.COVERAGE_LOST)


def attach(
    ms: MobileStation,
    cell: int,
    grid: Grid,
    now: float = 0.0,
    timers: TimerConfig = DEFAULT_TIMERS,
) -> Tuple[MobileStation, UpdateRecord]:
    """GPRS attach from IDLE at ``cell``; the registration counts as one HLR update."""
    if ms.state is not MMState.IDLE:
        raise StateMachineError(f"attach requires IDLE, station {ms.user_id} is {ms.state.name}")
    ms = replace(
        ms,
        state=MMState.READY,
        current_cell=cell,
        anchor_cell=cell,
        registered_la=la_of(grid, cell),
        ready_timer_remaining=timers.ready,
        standby_timer_remaining=0.0,
        attaches=ms.attaches + 1,
    )
    rec = UpdateRecord(
        user_id=ms.user_id,
        velocity=ms.kinematics.speed,
        direction=ms.kinematics.heading,
        cell_id=cell,
        time=now,
        state_at_trigger=MMState.READY,
        trigger=Trigger.ATTACH,
    )
    return ms, rec


def _detach(ms: MobileStation, **kw) -> MobileStation:
    return replace(
        ms,
        state=MMState.IDLE,
        anchor_cell=None,
        registered_la=None,
        ready_timer_remaining=0.0,
        standby_timer_remaining=0.0,
        **kw,
    )


def handle_event(
    ms: MobileStation,
    ev: MMEvent,
    scheme: SchemeConfig,
    grid: Grid,
    now: float,
    timers: TimerConfig = DEFAULT_TIMERS,
) -> Tuple[MobileStation, List[UpdateRecord]]:
    state = ms.state
    kind = ev.kind

    if kind is EventKind.COVERAGE_LOST:
        return _detach(ms, current_cell=None), []

    if kind is EventKind.COVERAGE_REGAINED:
        if state is MMState.IDLE:
            ms, rec = attach(ms, ev.cell, grid, now, timers)
            return ms, [rec]
        return replace(ms, current_cell=ev.cell), []

    if kind is EventKind.CELL_CHANGED:
        if state is MMState.IDLE:
            return replace(ms, current_cell=ev.cell), []
        ms = replace(ms, current_cell=ev.cell)
        if state is MMState.READY:
            ms = replace(ms, cell_updates=ms.cell_updates + 1)
        ms, rec = check_update(scheme, ms, ev.cell, grid, now)
        if rec is None:
            return ms, []
        if state is MMState.READY:
            ms = replace(ms, hlr_updates_ready=ms.hlr_updates_ready + 1)
        else:
            ms = replace(ms, hlr_updates_standby=ms.hlr_updates_standby + 1)
        return ms, [rec]

    if kind is EventKind.READY_TIMER_EXPIRY and state is MMState.READY:
        return replace(
            ms,
            state=MMState.STANDBY,
            ready_timer_remaining=0.0,
            standby_timer_remaining=timers.standby,
        ), []

    if kind is EventKind.STANDBY_TIMER_EXPIRY and state is MMState.STANDBY:
        return _detach(ms), []

    if kind is EventKind.SESSION_START:
        if state is MMState.STANDBY:
            return replace(
                ms,
                state=MMState.READY,
                ready_timer_remaining=timers.ready,
                standby_timer_remaining=0.0,
            ), []
        if state is MMState.READY:
            return ms, []
        if ms.current_cell is not None:
            # mobile-originated data from IDLE needs a fresh attach
            ms, rec = attach(ms, ms.current_cell, grid, now, timers)
            return ms, [rec]

    if kind is EventKind.SESSION_END and state is MMState.READY:
        return replace(ms, ready_timer_remaining=timers.ready), []

    log.debug("ignoring %s in %s for station %d", kind.value, state.name, ms.user_id)
    return ms, []


def advance_timers(
    ms: MobileStation, dt: float, in_session: bool = False
) -> Tuple[MobileStation, List[MMEvent]]:
    """Count the running timer down by ``dt``; the READY timer holds during a session."""
    if ms.state is MMState.READY and not in_session:
        left = ms.ready_timer_remaining - dt
        ms = replace(ms, ready_timer_remaining=left)
        if left <= 0.0:
            return ms, [READY_TIMER_EXPIRY]
    elif ms.state is MMState.STANDBY:
        left = ms.standby_timer_remaining - dt
        ms = replace(ms, standby_timer_remaining=left)
        if left <= 0.0:
            return ms, [STANDBY_TIMER_EXPIRY]
    return ms, []
