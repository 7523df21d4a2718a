"""Location-update simulator for GPRS mobile stations on a hexagonal grid."""
from .errors import (
    ConfigurationError,
    HexmobError,
    InvariantViolation,
    OrderingError,
    PagingError,
    StateMachineError,
)
from .hexgrid import Grid, HexCoord, build_grid, cells_within, hop_distance, la_of, nearest_cell
from .kernel import BACKEND
from .schemes import HlrLog, SchemeConfig, SchemeKind
from .sim_engine import SimConfig, SimReport, SweepReport, run, sweep
from .station import MMState, MobileStation, Trigger, UpdateRecord

__version__ = "0.1.0"
