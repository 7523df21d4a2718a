from dataclasses import replace

from hexmob.hexgrid import la_of
from hexmob.mobility import Kinematics
from hexmob.station import MMState, MobileStation


def station(grid, state=MMState.READY, cell=3, anchor=None, uid=0):
    ms = MobileStation(user_id=uid, kinematics=Kinematics(0.0, 0.0, 0.002, 1.0))
    if state is MMState.IDLE:
        return replace(ms, current_cell=cell)
    anchor = cell if anchor is None else anchor
    return replace(
        ms,
        state=state,
        current_cell=cell,
        anchor_cell=anchor,
        registered_la=la_of(grid, anchor),
        ready_timer_remaining=100.0 if state is MMState.READY else 0.0,
        standby_timer_remaining=2000.0 if state is MMState.STANDBY else 0.0,
    )
