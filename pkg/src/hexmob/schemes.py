"""Location-update schemes, the HLR log, and paging sets.

Two schemes are provided.  The distance scheme reports whenever the station
is ``D`` or more hops from the cell it last reported; paging then polls
every cell within ``D`` hops of that anchor.  The location-area scheme
reports whenever the broadcast LA id differs from the registered one and
pages the whole registered LA.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Mapping, Optional, Set, Tuple

from .errors import ConfigurationError, OrderingError, PagingError, StateMachineError
from .hexgrid import CellId, Grid, cells_within, hop_distance, la_members, la_of
from .station import MMState, MobileStation, Trigger, UpdateRecord

__all__ = [
    "SchemeKind",
    "SchemeConfig",
    "UpdateRecord",
    "HlrLog",
    "check_update",
    "paging_set",
    "append_record",
]


class SchemeKind(str, enum.Enum):
    DISTANCE = "distance"
    LOCATION_AREA = "la"


@dataclass(frozen=True)
class SchemeConfig:
    kind: SchemeKind = SchemeKind.DISTANCE
    distance_threshold_d: int = 2
    la_size: Optional[int] = None
    # user_id -> D, for users whose threshold differs from the global one
    per_user_threshold: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.distance_threshold_d < 1:
            raise ConfigurationError(
                f"distance threshold D must be >= 1, got {self.distance_threshold_d}"
            )
        for uid, d in self.per_user_threshold.items():
            if d < 1:
                raise ConfigurationError(f"threshold for user {uid} must be >= 1, got {d}")
        if self.la_size is not None and self.la_size < 1:
            raise ConfigurationError(f"la_size must be >= 1, got {self.la_size}")

    @classmethod
    def distance(cls, d: int = 2, **kw) -> "SchemeConfig":
        return cls(SchemeKind.DISTANCE, distance_threshold_d=d, **kw)

    @classmethod
    def location_area(cls, la_size: Optional[int] = None) -> "SchemeConfig":
        return cls(SchemeKind.LOCATION_AREA, la_size=la_size)

    def threshold_for(self, user_id: int) -> int:
        return self.per_user_threshold.get(user_id, self.distance_threshold_d)


class HlrLog:
    """Append-only sequence of update records with non-decreasing times."""

    def __init__(self, records=()):
        self._records: List[UpdateRecord] = []
        for rec in records:
            self.append(rec)

    def append(self, rec: UpdateRecord) -> None:
        if self._records and rec.time < self._records[-1].time:
            raise OrderingError(
                f"record at t={rec.time} follows record at t={self._records[-1].time}"
            )
        self._records.append(rec)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[UpdateRecord]:
        return iter(self._records)

    def __getitem__(self, i):
        return self._records[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, HlrLog) and self._records == other._records

    def __repr__(self) -> str:
        return f"HlrLog({len(self._records)} records)"


def append_record(log: HlrLog, rec: UpdateRecord) -> HlrLog:
    log.append(rec)
    return log


def _record(ms: MobileStation, cell: int, now: float, trigger: Trigger) -> UpdateRecord:
    k = ms.kinematics
    return UpdateRecord(
        user_id=ms.user_id,
        velocity=k.speed,
        direction=k.heading,
        cell_id=cell,
        time=now,
        state_at_trigger=ms.state,
        trigger=trigger,
    )


def check_update(
    scheme: SchemeConfig,
    ms: MobileStation,
    new_cell: int,
    grid: Grid,
    now: float,
) -> Tuple[MobileStation, Optional[UpdateRecord]]:
    """Decide whether entering ``new_cell`` must be reported to the HLR.

    Returns the (possibly re-anchored) station and the record, if any.
    """
    if ms.anchor_cell is None or ms.state is MMState.IDLE:
        raise StateMachineError(
            f"station {ms.user_id} has no anchor (state {ms.state.name})"
        )
    new_la = la_of(grid, new_cell)
    if scheme.kind is SchemeKind.DISTANCE:
        d = scheme.threshold_for(ms.user_id)
        if hop_distance(grid.coord(new_cell), grid.coord(ms.anchor_cell)) < d:
            return ms, None
        trigger = Trigger.DISTANCE_THRESHOLD
    else:
        if new_la == ms.registered_la:
            return ms, None
        trigger = Trigger.LA_CHANGE
    rec = _record(ms, new_cell, now, trigger)
    return replace(ms, anchor_cell=new_cell, registered_la=new_la), rec


def paging_set(scheme: SchemeConfig, ms: MobileStation, grid: Grid) -> Set[CellId]:
    """Cells polled for an incoming packet; the paging cost is its size."""
    if ms.state is MMState.IDLE:
        raise PagingError(f"station {ms.user_id} is IDLE and cannot be paged")
    if ms.state is MMState.READY:
        return {CellId(ms.current_cell)}
    if scheme.kind is SchemeKind.DISTANCE:
        return cells_within(grid, ms.anchor_cell, scheme.threshold_for(ms.user_id))
    return la_members(grid, ms.registered_la)
