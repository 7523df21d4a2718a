"""Reference station kernel written against the public module API."""
from __future__ import annotations

import math
from dataclasses import replace

from .errors import InvariantViolation
from .hexgrid import hop_distance, nearest_cell
from .kernel import KernelContext, StationResult
from .mm_state import (
    COVERAGE_LOST,
    SESSION_END,
    SESSION_START,
    MMEvent,
    advance_timers,
    handle_event,
)
from .mobility import Kinematics, step
from .schemes import paging_set
from .station import MMState, MobileStation


def _check(ctx: KernelContext, ms: MobileStation, d: int, now: float) -> None:
    grid = ctx.grid
    if (ms.state is MMState.IDLE) != (ms.anchor_cell is None and ms.registered_la is None):
        raise InvariantViolation(
            f"t={now}: station {ms.user_id} in {ms.state.name} with anchor={ms.anchor_cell}"
        )
    if ms.current_cell != nearest_cell(grid, ms.kinematics.position):
        raise InvariantViolation(f"t={now}: station {ms.user_id} current cell is stale")
    if not ms.attached:
        return
    if ctx.is_distance:
        hops = hop_distance(grid.coord(ms.current_cell), grid.coord(ms.anchor_cell))
        if hops >= d:
            raise InvariantViolation(
                f"t={now}: station {ms.user_id} is {hops} hops from anchor {ms.anchor_cell} (D={d})"
            )
    if ms.current_cell not in paging_set(ctx.scheme, ms, grid):
        raise InvariantViolation(
            f"t={now}: station {ms.user_id} in cell {ms.current_cell} outside its paging set"
        )


def simulate_station(
    ctx: KernelContext,
    user_id: int,
    kin: Kinematics,
    rng,
    d: int,
    validate: bool = False,
) -> StationResult:
    grid, scheme, timers = ctx.grid, ctx.scheme, ctx.timers
    dt = ctx.dt
    records = []
    paging_events = 0
    paging_cost = 0

    def deliver(ms, ev, now):
        ms, recs = handle_event(ms, ev, scheme, grid, now, timers)
        for rec in recs:
            if validate and rec.state_at_trigger is MMState.IDLE:
                raise InvariantViolation(f"t={now}: update emitted in IDLE by station {user_id}")
            records.append((
                rec.time, rec.user_id, rec.cell_id, int(rec.trigger),
                int(rec.state_at_trigger), rec.velocity, rec.direction,
            ))
        return ms

    # stations in coverage at t=0 start attached; this setup is not counted
    ms = MobileStation(user_id=user_id, kinematics=kin)
    cell = nearest_cell(grid, kin.position)
    if cell is not None:
        ms = replace(
            ms,
            state=MMState.READY,
            current_cell=cell,
            anchor_cell=cell,
            registered_la=int(ctx.la[cell]),
            ready_timer_remaining=timers.ready,
        )

    in_session = False
    session_left = 0.0
    for k in range(ctx.n_ticks):
        now = (k + 1) * dt
        kin = step(ms.kinematics, dt, ctx.tau, ctx.box, rng)
        ms = replace(ms, kinematics=kin)

        new = nearest_cell(grid, kin.position)
        cur = ms.current_cell
        if cur is not None and new is None:
            in_session = False
            ms = deliver(ms, COVERAGE_LOST, now)
        elif cur is None and new is not None:
            ms = deliver(ms, MMEvent.coverage_regained(new), now)
        elif cur != new:
            ms = deliver(ms, MMEvent.cell_changed(new), now)

        ms, expiries = advance_timers(ms, dt, in_session)
        for ev in expiries:
            ms = deliver(ms, ev, now)

        if in_session:
            session_left -= dt
            if session_left <= 0.0:
                in_session = False
                ms = deliver(ms, SESSION_END, now)
        elif rng.random() < ctx.p_session and ms.current_cell is not None:
            session_left = -ctx.mean_tx * math.log(1.0 - rng.random())
            if ms.attached:
                paging_events += 1
                paging_cost += len(paging_set(scheme, ms, grid))
            in_session = True
            ms = deliver(ms, SESSION_START, now)

        if validate:
            _check(ctx, ms, d, now)

    return StationResult(
        records=records,
        hlr_updates_ready=ms.hlr_updates_ready,
        hlr_updates_standby=ms.hlr_updates_standby,
        cell_updates=ms.cell_updates,
        attaches=ms.attaches,
        paging_events=paging_events,
        paging_cost=paging_cost,
    )
