"""Per-station simulation kernel and backend selection.

A run is a set of fully independent stations, so the hot loop simulates one
station over all ticks.  Two interchangeable implementations exist:

* ``hexmob._ckernel``: compiled Cython, used when the extension is built;
* ``hexmob._pykernel``: pure Python on top of the public module functions.

Both consume the station's random stream in the same order and produce
bit-identical results.  Set ``HEXMOB_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .hexgrid import Grid, cells_within, la_members
from .mobility import MotionBox, turn_probability
from .schemes import SchemeConfig, SchemeKind
from .station import TimerConfig

# records are (time, user_id, cell_id, trigger, state, velocity, direction)
RawRecord = Tuple[float, int, int, int, int, float, float]


@dataclass
class StationResult:
    records: List[RawRecord]
    hlr_updates_ready: int
    hlr_updates_standby: int
    cell_updates: int
    attaches: int
    paging_events: int
    paging_cost: int


@dataclass
class KernelContext:
    grid: Grid
    scheme: SchemeConfig
    timers: TimerConfig
    box: MotionBox
    dt: float
    tau: float
    n_ticks: int
    mean_interarrival: float
    mean_tx: float
    p_turn: float = field(init=False)
    p_session: float = field(init=False)
    is_distance: bool = field(init=False)
    bs_x: np.ndarray = field(init=False, repr=False)
    bs_y: np.ndarray = field(init=False, repr=False)
    la: np.ndarray = field(init=False, repr=False)
    la_cells: np.ndarray = field(init=False, repr=False)
    hop: np.ndarray = field(init=False, repr=False)
    _standby_tables: Dict[int, np.ndarray] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        g = self.grid
        self.p_turn = turn_probability(self.dt, self.tau)
        self.p_session = 1.0 - math.exp(-self.dt / self.mean_interarrival)
        self.is_distance = self.scheme.kind is SchemeKind.DISTANCE
        self.bs_x = np.array(g.bs_x, dtype=np.float64)
        self.bs_y = np.array(g.bs_y, dtype=np.float64)
        self.la = np.array([i // g.la_size for i in range(g.cell_count)], dtype=np.int32)
        self.la_cells = np.array(
            [len(la_members(g, la)) for la in range(g.la_count)], dtype=np.int32
        )
        self.hop = np.array(g.hop_table(), dtype=np.int32)

    def standby_paging_table(self, d: int) -> np.ndarray:
        """Membership matrix of STANDBY paging sets, ``[key, cell]``.

        ``key`` is the anchor cell for the distance scheme and the registered
        LA otherwise.  Built from the reference paging functions so the
        compiled kernel's validation mode checks against them.
        """
        key = d if self.is_distance else 0
        table = self._standby_tables.get(key)
        if table is None:
            g = self.grid
            if self.is_distance:
                rows = [cells_within(g, a, d) for a in range(g.cell_count)]
            else:
                rows = [la_members(g, la) for la in range(g.la_count)]
            table = np.zeros((len(rows), g.cell_count), dtype=np.uint8)
            for i, cells in enumerate(rows):
                table[i, sorted(cells)] = 1
            self._standby_tables[key] = table
        return table


def _select():
    choice = os.environ.get("HEXMOB_BACKEND", "auto").lower()
    if choice not in ("auto", "c", "python"):
        raise ImportError(f"HEXMOB_BACKEND must be auto, c or python, not {choice!r}")
    if choice != "python":
        try:
            from ._ckernel import simulate_station as fn
            return "c", fn
        except ImportError:
            if choice == "c":
                raise
    from ._pykernel import simulate_station as fn
    return "python", fn


BACKEND, simulate_station = _select()


def get_backend(name: str):
    """Return the ``simulate_station`` function of a named backend."""
    if name == "python":
        from ._pykernel import simulate_station as fn
    elif name == "c":
        from ._ckernel import simulate_station as fn
    else:
        raise ValueError(f"unknown backend {name!r}")
    return fn


def available_backends() -> List[str]:
    out = ["python"]
    try:
        from . import _ckernel  # noqa: F401
        out.insert(0, "c")
    except ImportError:
        pass
    return out
