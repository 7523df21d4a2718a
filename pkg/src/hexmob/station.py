"""Per-station records shared by the state machine and the update schemes."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .mobility import Kinematics


class MMState(enum.IntEnum):
    IDLE = 0
    READY = 1
    STANDBY = 2


class Trigger(enum.IntEnum):
    ATTACH = 0
    DISTANCE_THRESHOLD = 1
    LA_CHANGE = 2

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class TimerConfig:
    ready: float = 100.0
    standby: float = 2000.0


@dataclass(frozen=True)
class UpdateRecord:
    """One location update as stored in the HLR."""

    user_id: int
    velocity: float
    direction: float
    cell_id: int
    time: float
    state_at_trigger: MMState
    trigger: Trigger


@dataclass(frozen=True)
class MobileStation:
    user_id: int
    kinematics: Kinematics
    state: MMState = MMState.IDLE
    current_cell: Optional[int] = None
    anchor_cell: Optional[int] = None
    registered_la: Optional[int] = None
    ready_timer_remaining: float = 0.0
    standby_timer_remaining: float = 0.0
    hlr_updates_ready: int = 0
    hlr_updates_standby: int = 0
    cell_updates: int = 0
    attaches: int = 0

    @property
    def attached(self) -> bool:
        return self.state is not MMState.IDLE

    @property
    def hlr_updates(self) -> int:
        return self.hlr_updates_ready + self.hlr_updates_standby + self.attaches
