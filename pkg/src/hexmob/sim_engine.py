"""Discrete-time simulation driver, reports, and velocity sweeps."""
from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernel as _kernel
from .errors import ConfigurationError
from .hexgrid import Grid, build_grid
from .kernel import KernelContext
from .mobility import init_stations, motion_box
from .schemes import HlrLog, SchemeConfig
from .station import MMState, TimerConfig, Trigger, UpdateRecord

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """All parameters of one run.

    ``max_speed`` is given in length units per ``speed_time_unit`` time
    units; the default of 1000 reads it as length units per second on a
    millisecond clock.
    """

    stations: int = 10
    rows: int = 4
    cols: int = 7
    cell_radius: float = 1.0
    coverage_radius: float = 2.0
    la_size: int = 7
    scheme: SchemeConfig = field(default_factory=SchemeConfig)
    max_speed: float = 1.0
    speed_time_unit: float = 1000.0
    motion_timescale: float = 100.0
    avg_tx_time: float = 12.0
    session_interarrival_mean: float = 200.0
    sim_time: float = 30000.0
    dt: float = 1.0
    seed: int = 0
    ready_timer: float = 100.0
    standby_timer: float = 2000.0

    def validate(self) -> None:
        if self.stations < 1:
            raise ConfigurationError(f"stations must be >= 1, got {self.stations}")
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        if self.la_size < 1:
            raise ConfigurationError(f"la_size must be >= 1, got {self.la_size}")
        positive = {
            "cell_radius": self.cell_radius,
            "coverage_radius": self.coverage_radius,
            "speed_time_unit": self.speed_time_unit,
            "motion_timescale": self.motion_timescale,
            "avg_tx_time": self.avg_tx_time,
            "session_interarrival_mean": self.session_interarrival_mean,
            "dt": self.dt,
            "ready_timer": self.ready_timer,
            "standby_timer": self.standby_timer,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if not self.max_speed >= 0:
            raise ConfigurationError(f"max_speed must be non-negative, got {self.max_speed}")
        if not self.sim_time >= 0:
            raise ConfigurationError(f"sim_time must be non-negative, got {self.sim_time}")
        if not isinstance(self.scheme, SchemeConfig):
            raise ConfigurationError("scheme must be a SchemeConfig")

    @property
    def speed(self) -> float:
        """Station speed in length units per simulation time unit."""
        return self.max_speed / self.speed_time_unit

    @property
    def n_ticks(self) -> int:
        return math.ceil(self.sim_time / self.dt)

    @property
    def effective_la_size(self) -> int:
        return self.scheme.la_size or self.la_size

    def grid(self) -> Grid:
        return build_grid(
            self.rows, self.cols, self.cell_radius, self.coverage_radius, self.effective_la_size
        )

    def as_dict(self) -> Dict:
        d = asdict(self)
        d["scheme"] = {
            "kind": self.scheme.kind.value,
            "distance_threshold_d": self.scheme.distance_threshold_d,
            "la_size": self.scheme.la_size,
        }
        return d


@dataclass
class SimReport:
    per_station_updates: Tuple[int, ...]
    total_updates: int
    updates_ready: int
    updates_standby: int
    attaches: int
    cell_updates: int
    paging_events: int
    total_paging_cost: int
    config: SimConfig
    seed: int
    log: HlrLog

    @property
    def updates_by_state(self) -> Dict[str, int]:
        return {"ready": self.updates_ready, "standby": self.updates_standby}

    def summary(self) -> Dict:
        return {
            "per_station_updates": list(self.per_station_updates),
            "total_updates": self.total_updates,
            "updates_by_state": self.updates_by_state,
            "attaches": self.attaches,
            "cell_updates": self.cell_updates,
            "paging_events": self.paging_events,
            "total_paging_cost": self.total_paging_cost,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SweepRow:
    velocity: float
    stations: int
    mean_updates_ready: float
    mean_updates_standby: float
    mean_total: float
    std_total: float
    runs: int
    totals: Tuple[int, ...] = field(default=(), compare=False, repr=False)


@dataclass
class SweepReport:
    rows: List[SweepRow]

    def __len__(self) -> int:
        return len(self.rows)


def derive_rng_streams(seed: int, run_index: int, station_index: int) -> np.random.Generator:
    """Independent PCG64 stream for one station of one run."""
    ss = np.random.SeedSequence(seed & _SEED_MASK, spawn_key=(run_index, station_index))
    return np.random.Generator(np.random.PCG64(ss))


def make_context(config: SimConfig) -> KernelContext:
    grid = config.grid()
    return KernelContext(
        grid=grid,
        scheme=config.scheme,
        timers=TimerConfig(config.ready_timer, config.standby_timer),
        box=motion_box(grid),
        dt=float(config.dt),
        tau=float(config.motion_timescale),
        n_ticks=config.n_ticks,
        mean_interarrival=float(config.session_interarrival_mean),
        mean_tx=float(config.avg_tx_time),
    )


def run(
    config: SimConfig,
    *,
    validate: bool = False,
    reverse: bool = False,
    backend: Optional[str] = None,
    run_index: int = 0,
) -> SimReport:
    """Simulate every station for ``ceil(sim_time / dt)`` ticks.

    Stations evolve independently on their own random streams, so the report
    does not depend on the order they are processed in (``reverse`` exists to
    check exactly that).
    """
    config.validate()
    simulate = _kernel.simulate_station if backend is None else _kernel.get_backend(backend)
    ctx = make_context(config)
    n = config.stations
    order = range(n - 1, -1, -1) if reverse else range(n)

    results = {}
    for i in order:
        rng = derive_rng_streams(config.seed, run_index, i)
        (kin,) = init_stations(1, ctx.box, config.speed, rng)
        results[i] = simulate(ctx, i, kin, rng, config.scheme.threshold_for(i), validate)

    raw = []
    for i in range(n):
        raw.extend(results[i].records)
    # stable: same-tick records of one station keep their emission order
    raw.sort(key=lambda r: (r[0], r[1]))
    log = HlrLog(
        UpdateRecord(
            user_id=r[1], velocity=r[5], direction=r[6], cell_id=r[2], time=r[0],
            state_at_trigger=MMState(r[4]), trigger=Trigger(r[3]),
        )
        for r in raw
    )

    per_station = tuple(
        results[i].hlr_updates_ready + results[i].hlr_updates_standby + results[i].attaches
        for i in range(n)
    )
    res = [results[i] for i in range(n)]
    return SimReport(
        per_station_updates=per_station,
        total_updates=sum(per_station),
        updates_ready=sum(r.hlr_updates_ready for r in res),
        updates_standby=sum(r.hlr_updates_standby for r in res),
        attaches=sum(r.attaches for r in res),
        cell_updates=sum(r.cell_updates for r in res),
        paging_events=sum(r.paging_events for r in res),
        total_paging_cost=sum(r.paging_cost for r in res),
        config=config,
        seed=config.seed,
        log=log,
    )


def _sweep_point(args) -> Tuple[int, int, int]:
    config, backend = args
    r = run(config, backend=backend)
    return r.updates_ready, r.updates_standby, r.total_updates


def sweep(
    config: SimConfig,
    velocities: Sequence[float],
    runs: int,
    *,
    workers: int = 1,
    backend: Optional[str] = None,
) -> SweepReport:
    """Mean HLR update counts per velocity over ``runs`` seeds each.

    Run ``j`` of every velocity uses seed ``config.seed + j``.  Results are
    aggregated in (velocity, run) order, so any ``workers`` count gives the
    same report.
    """
    if runs < 1:
        raise ConfigurationError(f"runs must be >= 1, got {runs}")
    config.validate()
    jobs = [
        (replace(config, max_speed=float(v), seed=config.seed + j), backend)
        for v in velocities
        for j in range(runs)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_sweep_point(job) for job in jobs]

    rows = []
    for vi, v in enumerate(velocities):
        chunk = results[vi * runs:(vi + 1) * runs]
        totals = tuple(t for _, _, t in chunk)
        rows.append(SweepRow(
            velocity=float(v),
            stations=config.stations,
            mean_updates_ready=statistics.fmean(r for r, _, _ in chunk),
            mean_updates_standby=statistics.fmean(s for _, s, _ in chunk),
            mean_total=statistics.fmean(totals),
            std_total=statistics.stdev(totals) if runs > 1 else 0.0,
            runs=runs,
            totals=totals,
        ))
    return SweepReport(rows)
